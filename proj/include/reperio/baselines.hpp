#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "reperio/clip.hpp"
#include "reperio/signal.hpp"
#include "reperio/synth.hpp"

namespace reperio {

// Spatial channel means over a region of interest, one RGB triple per frame.
struct RoiTrace {
    std::vector<double> rgb_means;  // [T][3]
    double fps = 0.0;

    std::size_t frames() const { return rgb_means.size() / 3; }
    double at(std::size_t t, std::size_t c) const { return rgb_means[t * 3 + c]; }

    void validate() const {
        if (frames() < 2) throw std::invalid_argument("RoiTrace: need at least 2 frames");
        if (!(fps > 0.0)) throw std::invalid_argument("RoiTrace: fps must be positive");
        for (double v : rgb_means) {
            if (!(v > 0.0)) throw std::invalid_argument("RoiTrace: means must be positive");
        }
    }
};

enum class RoiKind {
    SkinMask,    // synthetic data: the generator's circular skin region
    CenterCrop,  // ingested footage: central half-size crop
};

inline RoiTrace extract_trace(const Clip& clip, RoiKind kind = RoiKind::SkinMask) {
    std::vector<bool> mask;
    if (kind == RoiKind::SkinMask) {
        mask = skin_mask(clip.H, clip.W);
    } else {
        mask.assign(clip.H * clip.W, false);
        for (std::size_t y = clip.H / 4; y < clip.H - clip.H / 4; ++y)
            for (std::size_t x = clip.W / 4; x < clip.W - clip.W / 4; ++x)
                mask[y * clip.W + x] = true;
    }
    std::size_t count = 0;
    for (bool b : mask) count += b ? 1 : 0;
    if (count == 0) throw std::runtime_error("extract_trace: empty region of interest");

    RoiTrace trace;
    trace.fps = clip.fps;
    trace.rgb_means.assign(clip.T * 3, 0.0);
    for (std::size_t t = 0; t < clip.T; ++t) {
        for (std::size_t y = 0; y < clip.H; ++y)
            for (std::size_t x = 0; x < clip.W; ++x) {
                if (!mask[y * clip.W + x]) continue;
                for (std::size_t c = 0; c < 3; ++c)
                    trace.rgb_means[t * 3 + c] += clip.at(t, y, x, c);
            }
        for (std::size_t c = 0; c < 3; ++c)
            trace.rgb_means[t * 3 + c] /= static_cast<double>(count);
    }
    return trace;
}

// Classic windowed plane-orthogonal-to-skin pulse extraction: per sliding
// window, normalize each channel by its window mean, project with
// [[0,1,-1],[-2,1,1]], combine ch1 + (std1/std2)*ch2, center, overlap-add.
inline BvpSeries pos_signal(const RoiTrace& trace, double window_seconds = 1.6) {
    trace.validate();
    const std::size_t T = trace.frames();
    const std::size_t w = static_cast<std::size_t>(std::lround(window_seconds * trace.fps));
    if (w < 2 || T < w) throw std::invalid_argument("pos_signal: trace shorter than window");

    std::vector<double> out(T, 0.0);
    std::vector<double> s1(w), s2(w);
    for (std::size_t start = 0; start + w <= T; ++start) {
        std::array<double, 3> mean{0.0, 0.0, 0.0};
        for (std::size_t k = 0; k < w; ++k)
            for (std::size_t c = 0; c < 3; ++c) mean[c] += trace.at(start + k, c);
        for (auto& m : mean) m /= static_cast<double>(w);
        for (std::size_t k = 0; k < w; ++k) {
            const double rn = trace.at(start + k, 0) / mean[0];
            const double gn = trace.at(start + k, 1) / mean[1];
            const double bn = trace.at(start + k, 2) / mean[2];
            s1[k] = gn - bn;
            s2[k] = -2.0 * rn + gn + bn;
        }
        const double sd1 = stddev_of(s1);
        const double sd2 = stddev_of(s2);
        if (sd2 == 0.0) throw std::domain_error("pos_signal: degenerate variance");
        const double alpha = sd1 / sd2;
        double m = 0.0;
        for (std::size_t k = 0; k < w; ++k) m += s1[k] + alpha * s2[k];
        m /= static_cast<double>(w);
        for (std::size_t k = 0; k < w; ++k) out[start + k] += s1[k] + alpha * s2[k] - m;
    }
    return BvpSeries(std::move(out), trace.fps);
}

// Standard chrominance combination on whole-trace mean-normalized channels:
// Xs = 3Rn - 2Gn, Ys = 1.5Rn + Gn - 1.5Bn, output bandpassed Xs - (sX/sY)*Ys.
inline BvpSeries chrom_signal(const RoiTrace& trace, double lo_hz = 0.6, double hi_hz = 3.3) {
    trace.validate();
    const std::size_t T = trace.frames();
    std::array<double, 3> mean{0.0, 0.0, 0.0};
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t c = 0; c < 3; ++c) mean[c] += trace.at(t, c);
    for (auto& m : mean) m /= static_cast<double>(T);

    std::vector<double> xs(T), ys(T);
    for (std::size_t t = 0; t < T; ++t) {
        const double rn = trace.at(t, 0) / mean[0];
        const double gn = trace.at(t, 1) / mean[1];
        const double bn = trace.at(t, 2) / mean[2];
        xs[t] = 3.0 * rn - 2.0 * gn;
        ys[t] = 1.5 * rn + gn - 1.5 * bn;
    }
    const double sx = stddev_of(xs);
    const double sy = stddev_of(ys);
    if (sy == 0.0) throw std::domain_error("chrom_signal: degenerate variance");
    const double alpha = sx / sy;
    std::vector<double> h(T);
    for (std::size_t t = 0; t < T; ++t) h[t] = xs[t] - alpha * ys[t];
    return bandpass(BvpSeries(std::move(h), trace.fps), lo_hz, hi_hz);
}

}  // namespace reperio
