#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "reperio/clip.hpp"
#include "reperio/dtft.hpp"
#include "reperio/rng.hpp"
#include "reperio/signal.hpp"
#include "reperio/tensor.hpp"

namespace reperio {

// Relative RGB strength of the injected pulse; green-dominant by convention.
inline constexpr double kPulseChannelWeights[3] = {0.3, 0.6, 0.1};

// Illumination drift is a slow sinusoid well below the pulse band.
inline constexpr double kDriftHz = 0.2;

// Skin circle radius as a fraction of min(H, W).
inline constexpr double kSkinRadiusFraction = 0.375;

struct SynthConfig {
    std::size_t T = 300, H = 32, W = 32;
    double fps = 30.0;
    double hr_bpm = 72.0;
    double pulse_amplitude = 0.05;
    double base_skin_rgb[3] = {0.55, 0.40, 0.30};
    double illum_drift_amp = 0.03;
    double noise_std = 0.01;
    std::uint64_t seed = 0;

    void validate() const {
        if (T < 2 || H < 1 || W < 1 || !(fps > 0.0))
            throw std::invalid_argument("SynthConfig: bad geometry");
        if (hr_bpm < 36.0 || hr_bpm > 198.0)
            throw std::invalid_argument("SynthConfig: hr_bpm outside [36, 198]");
        double margin = 1.0;
        for (double b : base_skin_rgb) margin = std::min({margin, b, 1.0 - b});
        if (pulse_amplitude + illum_drift_amp + 3.0 * noise_std >= margin)
            throw std::invalid_argument("dynamic range overflow");
    }
};

// True where the pixel lies inside the central circular skin region.
inline std::vector<bool> skin_mask(std::size_t H, std::size_t W) {
    std::vector<bool> mask(H * W, false);
    const double cy = (static_cast<double>(H) - 1.0) / 2.0;
    const double cx = (static_cast<double>(W) - 1.0) / 2.0;
    const double r = kSkinRadiusFraction * static_cast<double>(std::min(H, W));
    for (std::size_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x < W; ++x) {
            const double dy = static_cast<double>(y) - cy;
            const double dx = static_cast<double>(x) - cx;
            mask[y * W + x] = dy * dy + dx * dx <= r * r;
        }
    return mask;
}

// Ideal sinusoidal pulse: samples[t] = sin(2*pi*(hr/60)*t/fps + phase).
inline BvpSeries gen_bvp(const SynthConfig& cfg, double phase) {
    cfg.validate();
    std::vector<double> s(cfg.T);
    const double omega = kTwoPi * (cfg.hr_bpm / 60.0) / cfg.fps;
    for (std::size_t t = 0; t < cfg.T; ++t)
        s[t] = std::sin(omega * static_cast<double>(t) + phase);
    return BvpSeries(std::move(s), cfg.fps);
}

// Synthesizes one clip and its ground-truth pulse. Draw order from the
// clip's stream: pulse phase, drift phase, then per-(t,y,x,c) noise.
inline std::pair<Clip, BvpSeries> gen_clip(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng = Rng::derive(cfg.seed, {0x636c6970ULL});  // "clip" stream tag
    const double pulse_phase = rng.uniform(0.0, kTwoPi);
    const double drift_phase = rng.uniform(0.0, kTwoPi);
    BvpSeries bvp = gen_bvp(cfg, pulse_phase);
    const auto mask = skin_mask(cfg.H, cfg.W);

    Clip clip(cfg.T, cfg.H, cfg.W, cfg.fps);
    const double drift_omega = kTwoPi * kDriftHz / cfg.fps;
    for (std::size_t t = 0; t < cfg.T; ++t) {
        const double drift =
            cfg.illum_drift_amp * std::sin(drift_omega * static_cast<double>(t) + drift_phase);
        for (std::size_t y = 0; y < cfg.H; ++y)
            for (std::size_t x = 0; x < cfg.W; ++x) {
                const bool skin = mask[y * cfg.W + x];
                for (std::size_t c = 0; c < 3; ++c) {
                    double v = cfg.base_skin_rgb[c] + drift;
                    if (skin)
                        v += cfg.pulse_amplitude * bvp.samples[t] * kPulseChannelWeights[c];
                    if (cfg.noise_std > 0.0) v += cfg.noise_std * rng.gaussian();
                    clip.at(t, y, x, c) = std::clamp(v, 0.0, 1.0);
                }
            }
    }
    return {std::move(clip), std::move(bvp)};
}

struct SynthRanges {
    SynthConfig base;  // geometry, fps, amplitudes; hr_bpm ignored
    double hr_min_bpm = 72.0;
    double hr_max_bpm = 120.0;
};

struct ManifestRow {
    std::string id;
    double fps = 0.0;
    double hr_bpm = 0.0;
    std::uint64_t seed = 0;
};

inline std::string clip_id(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "clip%04zu", index);
    return buf;
}

// Writes n_clips under out_dir/clips/<id>/{video.rptf,bvp.rptf} plus
// manifest.csv. Each clip's stream derives from (seed, index), so clips are
// reproducible individually and generation order does not matter.
inline std::vector<ManifestRow> gen_dataset(std::size_t n_clips, const SynthRanges& ranges,
                                            std::uint64_t seed,
                                            const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    if (ranges.hr_min_bpm > ranges.hr_max_bpm)
        throw std::invalid_argument("gen_dataset: hr range inverted");
    std::error_code ec;
    fs::create_directories(out_dir / "clips", ec);
    if (ec) throw std::runtime_error("gen_dataset: cannot create " + out_dir.string());

    std::vector<ManifestRow> manifest;
    manifest.reserve(n_clips);
    for (std::size_t i = 0; i < n_clips; ++i) {
        SynthConfig cfg = ranges.base;
        std::uint64_t sm = seed;
        splitmix64(sm);
        sm ^= i * 0x9E3779B97F4A7C15ULL;
        cfg.seed = splitmix64(sm);
        Rng hr_rng = Rng::derive(cfg.seed, {0x6872ULL});  // "hr" stream tag
        cfg.hr_bpm = hr_rng.uniform(ranges.hr_min_bpm, ranges.hr_max_bpm);

        auto [clip, bvp] = gen_clip(cfg);
        const std::string id = clip_id(i);
        const fs::path dir = out_dir / "clips" / id;
        fs::create_directories(dir, ec);
        if (ec) throw std::runtime_error("gen_dataset: cannot create " + dir.string());

        TensorF video({clip.T, clip.H, clip.W, 3}, std::move(clip.data));
        write_tensor(dir / "video.rptf", video, Dtype::f32);
        TensorF bvp_tensor({bvp.samples.size()}, bvp.samples);
        write_tensor(dir / "bvp.rptf", bvp_tensor, Dtype::f64);
        manifest.push_back({id, cfg.fps, cfg.hr_bpm, cfg.seed});
    }

    std::ofstream os(out_dir / "manifest.csv");
    if (!os) throw std::runtime_error("gen_dataset: cannot write manifest.csv");
    os << "id,fps,hr_bpm,seed\n";
    char line[128];
    for (const auto& row : manifest) {
        std::snprintf(line, sizeof(line), "%s,%.17g,%.17g,%llu\n", row.id.c_str(), row.fps,
                      row.hr_bpm, static_cast<unsigned long long>(row.seed));
        os << line;
    }
    return manifest;
}

}  // namespace reperio
