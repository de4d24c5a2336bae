#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reperio/fft.hpp"

namespace reperio {

// A sampled blood-volume-pulse signal (ground truth or prediction).
struct BvpSeries {
    std::vector<double> samples;
    double fps = 0.0;

    BvpSeries() = default;
    BvpSeries(std::vector<double> s, double frames_per_second)
        : samples(std::move(s)), fps(frames_per_second) {
        validate();
    }

    std::size_t size() const { return samples.size(); }

    void validate() const {
        if (samples.size() < 2) throw std::invalid_argument("BvpSeries: need at least 2 samples");
        if (!(fps > 0.0)) throw std::invalid_argument("BvpSeries: fps must be positive");
        for (double v : samples) {
            if (!std::isfinite(v)) throw std::invalid_argument("BvpSeries: non-finite sample");
        }
    }
};

inline double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Population variance, computed about x[0] so that a constant series yields
// exactly zero regardless of whether its value is representable.
inline double variance_of(std::span<const double> x) {
    const double shift = x.empty() ? 0.0 : x[0];
    double sum = 0.0;
    for (double v : x) sum += v - shift;
    const double m = sum / static_cast<double>(x.size());
    double acc = 0.0;
    for (double v : x) acc += ((v - shift) - m) * ((v - shift) - m);
    return acc / static_cast<double>(x.size());
}

inline double stddev_of(std::span<const double> x) { return std::sqrt(variance_of(x)); }

inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("pearson: need at least 2 points");
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw std::domain_error("degenerate series");
    return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

// Zero-phase band limiting: mean-detrend, zero every DFT bin whose frequency
// falls outside [lo_hz, hi_hz], invert. Output length equals input length.
inline BvpSeries bandpass(const BvpSeries& x, double lo_hz, double hi_hz) {
    x.validate();
    if (!(0.0 < lo_hz && lo_hz < hi_hz && hi_hz < x.fps / 2.0))
        throw std::invalid_argument("bandpass: require 0 < lo < hi < fps/2");
    const std::size_t n = x.samples.size();
    const double m = mean_of(x.samples);
    std::vector<cplx> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = cplx(x.samples[i] - m, 0.0);
    buf = fft(std::move(buf));
    std::size_t kept = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t k_fold = std::min(k, n - k);  // n-k folds conjugate bins
        const double f = static_cast<double>(k_fold) * x.fps / static_cast<double>(n);
        if (k == 0 || f < lo_hz || f > hi_hz) {
            buf[k] = cplx(0.0, 0.0);
        } else {
            ++kept;
        }
    }
    if (kept == 0) throw std::domain_error("band too narrow for T");
    buf = ifft(std::move(buf));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = buf[i].real();
    return BvpSeries(std::move(out), x.fps);
}

// Periodogram argmax on a zero-padded rectangular-window DFT, restricted to
// [lo_hz, hi_hz]. Returns beats per minute.
inline double estimate_hr(const BvpSeries& x, double lo_hz = 0.6, double hi_hz = 3.3,
                          int zero_pad_factor = 8) {
    x.validate();
    if (!(0.0 < lo_hz && lo_hz < hi_hz))
        throw std::invalid_argument("estimate_hr: require 0 < lo < hi");
    if (zero_pad_factor < 1) throw std::invalid_argument("estimate_hr: zero_pad_factor >= 1");
    const std::size_t n = x.samples.size();
    if (static_cast<double>(n) < 2.0 * x.fps)
        throw std::invalid_argument("estimate_hr: need at least 2 seconds of signal");
    const std::size_t n_bins = n * static_cast<std::size_t>(zero_pad_factor);
    const double m = mean_of(x.samples);
    std::vector<double> centered(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = x.samples[i] - m;
    const auto padded = fft_real(centered, n_bins);
    double best_mag = -1.0;
    double best_freq = 0.0;
    for (std::size_t k = 1; k <= n_bins / 2; ++k) {
        const double f = static_cast<double>(k) * x.fps / static_cast<double>(n_bins);
        if (f < lo_hz || f > hi_hz) continue;
        const double mag = std::abs(padded[k]);
        if (mag > best_mag) {
            best_mag = mag;
            best_freq = f;
        }
    }
    if (best_mag < 0.0) throw std::domain_error("estimate_hr: empty band");
    return 60.0 * best_freq;
}

// Strict interior local maxima, greedily thinned so that kept peaks are at
// least min_separation_frames apart; the taller peak wins a conflict.
// Expects an already band-limited signal; no filtering happens here.
inline std::vector<int> detect_peaks(const BvpSeries& x, int min_separation_frames) {
    x.validate();
    if (min_separation_frames < 1)
        throw std::invalid_argument("detect_peaks: min_separation_frames >= 1");
    const auto& s = x.samples;
    std::vector<int> candidates;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i] > s[i - 1] && s[i] > s[i + 1]) candidates.push_back(static_cast<int>(i));
    }
    // taller first; index breaks ties for determinism
    std::vector<int> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (s[candidates[a]] != s[candidates[b]]) return s[candidates[a]] > s[candidates[b]];
        return candidates[a] < candidates[b];
    });
    std::vector<int> kept;
    for (int oi : order) {
        const int idx = candidates[oi];
        bool blocked = false;
        for (int k : kept) {
            if (std::abs(k - idx) < min_separation_frames) {
                blocked = true;
                break;
            }
        }
        if (!blocked) kept.push_back(idx);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

struct HrvMetrics {
    double mean_ibi_ms = 0.0;
    double sdnn_ms = 0.0;
    double sd1_ms = 0.0;
    double sd2_ms = 0.0;
    // Empty when SD2 = 0 (degenerate Poincare plot, e.g. perfectly constant IBI).
    std::optional<double> sd1_sd2;
};

// Interbeat-interval statistics from ascending peak frame indices.
// All variances are population variances.
inline HrvMetrics hrv_metrics(std::span<const int> peak_indices, double fps) {
    if (peak_indices.size() < 3) throw std::invalid_argument("insufficient beats");
    if (!(fps > 0.0)) throw std::invalid_argument("hrv_metrics: fps must be positive");
    std::vector<double> ibi_ms;
    ibi_ms.reserve(peak_indices.size() - 1);
    for (std::size_t k = 0; k + 1 < peak_indices.size(); ++k) {
        if (peak_indices[k + 1] <= peak_indices[k])
            throw std::invalid_argument("hrv_metrics: peak indices must be strictly ascending");
        ibi_ms.push_back((peak_indices[k + 1] - peak_indices[k]) * 1000.0 / fps);
    }
    std::vector<double> diffs;
    diffs.reserve(ibi_ms.size() - 1);
    for (std::size_t k = 0; k + 1 < ibi_ms.size(); ++k) diffs.push_back(ibi_ms[k + 1] - ibi_ms[k]);

    HrvMetrics out;
    out.mean_ibi_ms = mean_of(ibi_ms);
    const double var_ibi = variance_of(ibi_ms);
    out.sdnn_ms = std::sqrt(var_ibi);
    const double sd1_sq = variance_of(diffs) / 2.0;
    out.sd1_ms = std::sqrt(sd1_sq);
    const double sd2_sq = 2.0 * var_ibi - sd1_sq;
    out.sd2_ms = std::sqrt(std::max(0.0, sd2_sq));
    if (out.sd2_ms > 0.0) out.sd1_sd2 = out.sd1_ms / out.sd2_ms;
    return out;
}

}  // namespace reperio
