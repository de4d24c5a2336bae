#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "reperio/clip.hpp"
#include "reperio/rng.hpp"
#include "reperio/signal.hpp"

namespace reperio {

// T x H x W x C feature stack handed to the model. C = 9 for the assembled
// input: raw RGB (possibly TCM-mixed), NDF, and one MPOS channel per scale.
struct FeatureClip {
    std::size_t T = 0, H = 0, W = 0, C = 0;
    double fps = 0.0;
    std::vector<double> data;  // [T][H][W][C]
    std::vector<std::string> channel_map;

    FeatureClip() = default;
    FeatureClip(std::size_t t, std::size_t h, std::size_t w, std::size_t c, double f)
        : T(t), H(h), W(w), C(c), fps(f), data(t * h * w * c, 0.0) {}

    double& at(std::size_t t, std::size_t y, std::size_t x, std::size_t c) {
        return data[((t * H + y) * W + x) * C + c];
    }
    double at(std::size_t t, std::size_t y, std::size_t x, std::size_t c) const {
        return data[((t * H + y) * W + x) * C + c];
    }
};

// Normalized difference frames: (f[t+1]-f[t]) / (f[t+1]+f[t]+eps) per pixel
// and channel; the final frame is zero by convention.
inline FeatureClip ndf(const Clip& clip, double eps = 1e-8) {
    if (clip.T < 2) throw std::invalid_argument("ndf: need at least 2 frames");
    FeatureClip out(clip.T, clip.H, clip.W, 3, clip.fps);
    for (std::size_t t = 0; t + 1 < clip.T; ++t)
        for (std::size_t y = 0; y < clip.H; ++y)
            for (std::size_t x = 0; x < clip.W; ++x)
                for (std::size_t c = 0; c < 3; ++c) {
                    const double a = clip.at(t + 1, y, x, c);
                    const double b = clip.at(t, y, x, c);
                    out.at(t, y, x, c) = (a - b) / (a + b + eps);
                }
    return out;
}

// Temporal-mean normalization per pixel/channel followed by projection onto
// the plane-orthogonal-to-skin axes: ch1 = Gn - Bn, ch2 = -2Rn + Gn + Bn.
inline FeatureClip pos_project(const Clip& clip) {
    FeatureClip out(clip.T, clip.H, clip.W, 2, clip.fps);
    const double inv_T = 1.0 / static_cast<double>(clip.T);
    for (std::size_t y = 0; y < clip.H; ++y)
        for (std::size_t x = 0; x < clip.W; ++x) {
            std::array<double, 3> mean{0.0, 0.0, 0.0};
            for (std::size_t t = 0; t < clip.T; ++t)
                for (std::size_t c = 0; c < 3; ++c) mean[c] += clip.at(t, y, x, c);
            for (std::size_t c = 0; c < 3; ++c) {
                mean[c] *= inv_T;
                if (!(mean[c] > 0.0)) throw std::domain_error("dead pixel");
            }
            for (std::size_t t = 0; t < clip.T; ++t) {
                const double rn = clip.at(t, y, x, 0) / mean[0];
                const double gn = clip.at(t, y, x, 1) / mean[1];
                const double bn = clip.at(t, y, x, 2) / mean[2];
                out.at(t, y, x, 0) = gn - bn;
                out.at(t, y, x, 1) = -2.0 * rn + gn + bn;
            }
        }
    return out;
}

inline double gaussian_sigma_for_kernel(int k) {
    return 0.3 * ((static_cast<double>(k) - 1.0) / 2.0 - 1.0) + 0.8;
}

inline std::vector<double> gaussian_kernel_1d(int k, double sigma = 0.0) {
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("gaussian kernel size must be odd");
    if (sigma <= 0.0) sigma = gaussian_sigma_for_kernel(k);
    const int radius = (k - 1) / 2;
    std::vector<double> kernel(static_cast<std::size_t>(k));
    double sum = 0.0;
    for (int j = -radius; j <= radius; ++j) {
        const double v = std::exp(-0.5 * (j * j) / (sigma * sigma));
        kernel[static_cast<std::size_t>(j + radius)] = v;
        sum += v;
    }
    for (auto& v : kernel) v /= sum;
    return kernel;
}

namespace detail {
// reflect-101 border: -1 -> 1, H -> H-2
inline std::size_t reflect_index(long idx, long n) {
    if (idx < 0) idx = -idx;
    if (idx >= n) idx = 2 * (n - 1) - idx;
    return static_cast<std::size_t>(idx);
}
}  // namespace detail

// Per-frame separable 2-D Gaussian blur; the temporal axis is untouched.
inline FeatureClip gaussian_blur(const FeatureClip& seq, int k, double sigma = 0.0) {
    if (k % 2 == 0) throw std::invalid_argument("gaussian_blur: kernel size must be odd");
    if (static_cast<std::size_t>(k) > 2 * std::min(seq.H, seq.W) - 1)
        throw std::invalid_argument("gaussian_blur: kernel too large for frame");
    const auto kernel = gaussian_kernel_1d(k, sigma);
    const int radius = (k - 1) / 2;
    const long h = static_cast<long>(seq.H), w = static_cast<long>(seq.W);

    FeatureClip tmp(seq.T, seq.H, seq.W, seq.C, seq.fps);
    // horizontal pass
    for (std::size_t t = 0; t < seq.T; ++t)
        for (std::size_t y = 0; y < seq.H; ++y)
            for (std::size_t x = 0; x < seq.W; ++x)
                for (std::size_t c = 0; c < seq.C; ++c) {
                    double acc = 0.0;
                    for (int j = -radius; j <= radius; ++j) {
                        const std::size_t xx = detail::reflect_index(static_cast<long>(x) + j, w);
                        acc += kernel[static_cast<std::size_t>(j + radius)] * seq.at(t, y, xx, c);
                    }
                    tmp.at(t, y, x, c) = acc;
                }
    // vertical pass
    FeatureClip out(seq.T, seq.H, seq.W, seq.C, seq.fps);
    for (std::size_t t = 0; t < seq.T; ++t)
        for (std::size_t y = 0; y < seq.H; ++y)
            for (std::size_t x = 0; x < seq.W; ++x)
                for (std::size_t c = 0; c < seq.C; ++c) {
                    double acc = 0.0;
                    for (int j = -radius; j <= radius; ++j) {
                        const std::size_t yy = detail::reflect_index(static_cast<long>(y) + j, h);
                        acc += kernel[static_cast<std::size_t>(j + radius)] * tmp.at(t, yy, x, c);
                    }
                    out.at(t, y, x, c) = acc;
                }
    return out;
}

inline constexpr std::array<int, 3> kMposKernels = {7, 15, 31};

// Multi-scale POS: blur the 2-channel POS stack at each kernel size, then
// combine ch1 + (Std_t(ch1)/(Std_t(ch2)+eps)) * ch2 per pixel. A temporally
// flat ch2 would make the ratio unbounded, so it falls back to ch1 alone.
inline FeatureClip mpos(const Clip& clip, const std::array<int, 3>& kernels = kMposKernels,
                        double eps = 1e-8, double sigma = 0.0) {
    const FeatureClip pos = pos_project(clip);
    FeatureClip out(clip.T, clip.H, clip.W, 3, clip.fps);
    for (std::size_t scale = 0; scale < kernels.size(); ++scale) {
        const FeatureClip blurred = gaussian_blur(pos, kernels[scale], sigma);
        for (std::size_t y = 0; y < clip.H; ++y)
            for (std::size_t x = 0; x < clip.W; ++x) {
                double m1 = 0.0, m2 = 0.0;
                for (std::size_t t = 0; t < clip.T; ++t) {
                    m1 += blurred.at(t, y, x, 0);
                    m2 += blurred.at(t, y, x, 1);
                }
                m1 /= static_cast<double>(clip.T);
                m2 /= static_cast<double>(clip.T);
                double v1 = 0.0, v2 = 0.0;
                for (std::size_t t = 0; t < clip.T; ++t) {
                    const double d1 = blurred.at(t, y, x, 0) - m1;
                    const double d2 = blurred.at(t, y, x, 1) - m2;
                    v1 += d1 * d1;
                    v2 += d2 * d2;
                }
                const double std1 = std::sqrt(v1 / static_cast<double>(clip.T));
                const double std2 = std::sqrt(v2 / static_cast<double>(clip.T));
                const double weight = std2 < eps ? 0.0 : std1 / (std2 + eps);
                for (std::size_t t = 0; t < clip.T; ++t)
                    out.at(t, y, x, scale) =
                        blurred.at(t, y, x, 0) + weight * blurred.at(t, y, x, 1);
            }
    }
    return out;
}

// Builds the 9-channel model input: optional horizontal flip of the raw clip
// (one draw, all frames), then [RGB | NDF | MPOS] in fixed channel order.
inline FeatureClip assemble_input(const Clip& tcm_clip, Rng& rng, double flip_prob = 0.5,
                                  double blur_sigma = 0.0) {
    const bool flip = flip_prob > 0.0 && rng.uniform() < flip_prob;
    const Clip clip = flip ? mirror_horizontal(tcm_clip) : tcm_clip;
    const FeatureClip diff = ndf(clip);
    const FeatureClip multi = mpos(clip, kMposKernels, 1e-8, blur_sigma);

    FeatureClip out(clip.T, clip.H, clip.W, 9, clip.fps);
    out.channel_map = {"tcm_r",  "tcm_g",   "tcm_b",   "ndf_r",  "ndf_g",
                       "ndf_b",  "mpos_k7", "mpos_k15", "mpos_k31"};
    for (std::size_t t = 0; t < clip.T; ++t)
        for (std::size_t y = 0; y < clip.H; ++y)
            for (std::size_t x = 0; x < clip.W; ++x) {
                for (std::size_t c = 0; c < 3; ++c) {
                    out.at(t, y, x, c) = clip.at(t, y, x, c);
                    out.at(t, y, x, 3 + c) = diff.at(t, y, x, c);
                    out.at(t, y, x, 6 + c) = multi.at(t, y, x, c);
                }
            }
    return out;
}

}  // namespace reperio
