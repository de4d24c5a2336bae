#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "reperio/clip.hpp"
#include "reperio/dtft.hpp"
#include "reperio/fft.hpp"
#include "reperio/rng.hpp"
#include "reperio/signal.hpp"

namespace reperio {

// Binary temporal mask: bits[t-1] = 0 exactly for s <= t < s+L, with t, s
// 1-based. Everything downstream converts to 0-based indices once.
struct TemporalMask {
    std::vector<std::uint8_t> bits;
    int s = 0;  // 1-based start of the replaced segment
    int L = 0;  // replaced length

    TemporalMask(int T, int start, int length) : s(start), L(length) {
        if (T < 2) throw std::invalid_argument("TemporalMask: T too small");
        if (L < 1 || L >= T) throw std::invalid_argument("TemporalMask: need 1 <= L < T");
        if (s < 1 || s > T - L + 1) throw std::invalid_argument("TemporalMask: s out of range");
        bits.assign(static_cast<std::size_t>(T), 1);
        for (int t = s; t < s + L; ++t) bits[static_cast<std::size_t>(t - 1)] = 0;
    }

    int T() const { return static_cast<int>(bits.size()); }
};

struct TcmParams {
    double p = 0.4;
    double r_min = 0.25;
    double r_max = 0.5;

    void validate() const {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("TcmParams: p outside [0,1]");
        if (!(0.0 < r_min && r_min <= r_max && r_max < 1.0))
            throw std::invalid_argument("TcmParams: need 0 < r_min <= r_max < 1");
    }
};

// One sinusoidal pulse component: A*sin(2*pi*f*t + phi) at sample index t.
struct SineSpec {
    double amplitude = 1.0;
    double freq_hz = 1.0;
    double phase = 0.0;
};

// Draws the augmentation decision for one clip: with probability p, a mask
// with L = floor(r*T), r ~ U(r_min, r_max), and s uniform on {1..T-L+1}.
inline std::optional<TemporalMask> sample_tcm(int T, const TcmParams& params, Rng& rng) {
    params.validate();
    if (T < 4) throw std::invalid_argument("sample_tcm: T must be >= 4");
    if (static_cast<int>(std::floor(params.r_min * T)) < 1)
        throw std::invalid_argument("clip too short for TCM");
    if (rng.uniform() >= params.p) return std::nullopt;
    const double r = rng.uniform(params.r_min, params.r_max);
    const int L = static_cast<int>(std::floor(r * T));
    const int s = static_cast<int>(rng.uniform_int(1, T - L + 1));
    return TemporalMask(T, s, L);
}

// Frame t of the output comes from clip_i where bits[t] = 1, else from
// clip_j; the label is mixed with the same mask.
inline std::pair<Clip, BvpSeries> apply_tcm(const Clip& clip_i, const Clip& clip_j,
                                            const BvpSeries& label_i, const BvpSeries& label_j,
                                            const TemporalMask& mask) {
    if (!clip_i.same_geometry(clip_j)) throw std::invalid_argument("apply_tcm: clip shape mismatch");
    if (clip_i.fps != clip_j.fps) throw std::invalid_argument("apply_tcm: fps mismatch");
    if (label_i.size() != clip_i.T || label_j.size() != clip_j.T)
        throw std::invalid_argument("apply_tcm: label length mismatch");
    if (mask.bits.size() != clip_i.T) throw std::invalid_argument("apply_tcm: mask length mismatch");

    Clip out = clip_i;
    BvpSeries label = label_i;
    const std::size_t frame_elems = clip_i.H * clip_i.W * 3;
    for (std::size_t t = 0; t < clip_i.T; ++t) {
        if (mask.bits[t] == 0) {
            std::copy_n(clip_j.data.begin() + static_cast<std::ptrdiff_t>(t * frame_elems),
                        frame_elems, out.data.begin() + static_cast<std::ptrdiff_t>(t * frame_elems));
            label.samples[t] = label_j.samples[t];
        }
    }
    return {std::move(out), std::move(label)};
}

struct TcmAuditEntry {
    std::size_t clip_index = 0;
    std::size_t partner_index = 0;
    int s = 0;
    int L = 0;
};

struct TcmBatchResult {
    std::vector<Clip> clips;
    std::vector<BvpSeries> labels;
    std::vector<TcmAuditEntry> audit;
};

// Per-clip sub-streams derive from (seed, batch_index, i), so results do not
// depend on iteration order. B = 1 is passed through untouched.
inline TcmBatchResult tcm_batch(const std::vector<Clip>& clips,
                                const std::vector<BvpSeries>& labels, const TcmParams& params,
                                std::uint64_t seed, std::uint64_t batch_index) {
    params.validate();
    if (clips.size() != labels.size()) throw std::invalid_argument("tcm_batch: size mismatch");
    if (clips.empty()) throw std::invalid_argument("tcm_batch: empty batch");
    TcmBatchResult result;
    result.clips = clips;
    result.labels = labels;
    const std::size_t B = clips.size();
    if (B == 1) return result;

    for (std::size_t i = 0; i < B; ++i) {
        Rng rng = Rng::derive(seed, {batch_index, static_cast<std::uint64_t>(i)});
        auto mask = sample_tcm(static_cast<int>(clips[i].T), params, rng);
        if (!mask) continue;
        // partner drawn uniformly from the other B-1 clips
        std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(B) - 2));
        if (j >= i) ++j;
        auto [mixed_clip, mixed_label] =
            apply_tcm(clips[i], clips[j], labels[i], labels[j], *mask);
        result.clips[i] = std::move(mixed_clip);
        result.labels[i] = std::move(mixed_label);
        result.audit.push_back({i, j, mask->s, mask->L});
    }
    return result;
}

// Time-domain mixed signal on the 1-based time axis: element n holds
// M(t)h1(t) + (1-M(t))h2(t) at t = n+1, in discrete-time units (omega_k =
// 2*pi*f_k/fps per sample).
inline std::vector<double> mixed_time_signal(const SineSpec& sig1, const SineSpec& sig2,
                                             const TemporalMask& mask, int T, double fps) {
    if (mask.T() != T) throw std::invalid_argument("mixed_time_signal: mask/T mismatch");
    const double w1 = kTwoPi * sig1.freq_hz / fps;
    const double w2 = kTwoPi * sig2.freq_hz / fps;
    std::vector<double> x(static_cast<std::size_t>(T));
    for (int t = 1; t <= T; ++t) {
        const double h1 = sig1.amplitude * std::sin(w1 * t + sig1.phase);
        const double h2 = sig2.amplitude * std::sin(w2 * t + sig2.phase);
        x[static_cast<std::size_t>(t - 1)] = mask.bits[static_cast<std::size_t>(t - 1)] ? h1 : h2;
    }
    return x;
}

// Closed-form spectrum of the masked mixture:
//   (A1/2i)[e^{i phi1}(U-W)(w-w1) - e^{-i phi1}(U-W)(w+w1)]
// + (A2/2i)[e^{i phi2} W(w-w2)    - e^{-i phi2} W(w+w2)]
// with U over the full 1..T range and W over the replaced segment.
inline std::complex<double> analytic_mixed_spectrum(const SineSpec& sig1, const SineSpec& sig2,
                                                    const TemporalMask& mask, int T, double fps,
                                                    double omega) {
    if (mask.T() != T) throw std::invalid_argument("analytic_mixed_spectrum: mask/T mismatch");
    const double w1 = kTwoPi * sig1.freq_hz / fps;
    const double w2 = kTwoPi * sig2.freq_hz / fps;
    const std::complex<double> i_unit(0.0, 1.0);
    const std::complex<double> half_over_i = 1.0 / (2.0 * i_unit);

    const auto uw = [&](double w) { return dtft_U(T, w) - dtft_W(mask.s, mask.L, w); };
    const std::complex<double> term1 =
        sig1.amplitude * half_over_i *
        (std::exp(i_unit * sig1.phase) * uw(omega - w1) -
         std::exp(-i_unit * sig1.phase) * uw(omega + w1));
    const std::complex<double> term2 =
        sig2.amplitude * half_over_i *
        (std::exp(i_unit * sig2.phase) * dtft_W(mask.s, mask.L, omega - w2) -
         std::exp(-i_unit * sig2.phase) * dtft_W(mask.s, mask.L, omega + w2));
    return term1 + term2;
}

struct SpectrumRow {
    double freq_hz = 0.0;
    double analytic_mag = 0.0;
    double fft_mag = 0.0;
};

// Samples the analytic spectrum and the zero-padded FFT of the time-domain
// mixture on the same one-sided grid (n_bins points around the circle).
inline std::vector<SpectrumRow> spectrum_rows(const SineSpec& sig1, const SineSpec& sig2,
                                              const TemporalMask& mask, int T, double fps,
                                              int n_bins) {
    if (n_bins < T) throw std::invalid_argument("spectrum_rows: n_bins must be >= T");
    const auto x = mixed_time_signal(sig1, sig2, mask, T, fps);
    const auto dft = fft_real(x, static_cast<std::size_t>(n_bins));
    std::vector<SpectrumRow> rows;
    rows.reserve(static_cast<std::size_t>(n_bins / 2 + 1));
    for (int k = 0; k <= n_bins / 2; ++k) {
        const double w = kTwoPi * static_cast<double>(k) / static_cast<double>(n_bins);
        SpectrumRow row;
        row.freq_hz = static_cast<double>(k) * fps / static_cast<double>(n_bins);
        row.analytic_mag = std::abs(analytic_mixed_spectrum(sig1, sig2, mask, T, fps, w));
        // the signal starts at t = 1, so the DFT of x differs from the
        // analytic transform by a unit-magnitude phase only
        row.fft_mag = std::abs(dft[static_cast<std::size_t>(k)]);
        rows.push_back(row);
    }
    return rows;
}

inline void emit_spectrum_csv(std::ostream& os, const SineSpec& sig1, const SineSpec& sig2,
                              const TemporalMask& mask, int T, double fps, int n_bins) {
    os << "freq_hz,analytic_mag,fft_mag\n";
    char line[128];
    for (const auto& row : spectrum_rows(sig1, sig2, mask, T, fps, n_bins)) {
        std::snprintf(line, sizeof(line), "%.9f,%.12g,%.12g\n", row.freq_hz, row.analytic_mag,
                      row.fft_mag);
        os << line;
    }
}

}  // namespace reperio
