#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reperio/graph.hpp"
#include "reperio/preprocess.hpp"
#include "reperio/rng.hpp"
#include "reperio/signal.hpp"
#include "reperio/tensor.hpp"

namespace reperio {

struct ModelConfig {
    int patch = 8;
    int embed_dim = 16;  // D
    int swin_layers = 2;
    int swin_heads = 2;
    int window = 2;
    int node_dim = 16;     // d_g
    int rgcn_hidden = 16;  // h1
    int gt_hidden = 16;    // h2
    int gt_heads = 2;      // C
    int att_dim = 0;       // attention projection dim; 0 means gt_hidden
    int past_window = 1;   // P
    int future_window = 1; // F
    int delta_min = 15;
    int delta_max = 25;
    bool relu_after_rgcn = true;
    bool check_finite = true;
    double blur_sigma = 0.0;  // 0 means derived from kernel size
    std::uint64_t seed = 0;

    int att_dim_effective() const { return att_dim > 0 ? att_dim : gt_hidden; }

    void validate_for(std::size_t H, std::size_t W) const {
        if (patch < 1 || embed_dim < 1 || swin_layers < 0 || swin_heads < 1 || window < 1 ||
            node_dim < 1 || rgcn_hidden < 1 || gt_hidden < 1 || gt_heads < 1)
            throw std::invalid_argument("ModelConfig: dimensions must be >= 1");
        if (embed_dim % swin_heads != 0)
            throw std::invalid_argument("ModelConfig: embed_dim must divide by swin_heads");
        if (H % static_cast<std::size_t>(patch) != 0 || W % static_cast<std::size_t>(patch) != 0)
            throw std::invalid_argument("ModelConfig: frame size must divide by patch");
        const std::size_t gh = H / static_cast<std::size_t>(patch);
        const std::size_t gw = W / static_cast<std::size_t>(patch);
        if (static_cast<std::size_t>(window) > gh || static_cast<std::size_t>(window) > gw)
            throw std::invalid_argument("ModelConfig: window larger than token grid");
        if (gh % static_cast<std::size_t>(window) != 0 || gw % static_cast<std::size_t>(window) != 0)
            throw std::invalid_argument("ModelConfig: window must tile the token grid");
    }
};

struct SwinBlockParams {
    TensorF ln1_gamma, ln1_beta;  // [D]
    TensorF qkv_kernel;           // [3D, D]
    TensorF qkv_bias;             // [3D]
    TensorF out_kernel;           // [D, D]
    TensorF out_bias;             // [D]
    TensorF ln2_gamma, ln2_beta;  // [D]
    TensorF mlp1_kernel;          // [4D, D]
    TensorF mlp1_bias;            // [4D]
    TensorF mlp2_kernel;          // [D, 4D]
    TensorF mlp2_bias;            // [D]
};

struct GtHeadParams {
    TensorF w1, w2;  // [h2, h1]
    TensorF w3, w4;  // [att, h1]
};

struct ModelParams {
    TensorF patch_kernel;  // [D, 9*patch^2]
    TensorF patch_bias;    // [D]
    std::vector<SwinBlockParams> blocks;
    TensorF frame_kernel;  // [d_g, D]
    TensorF frame_bias;    // [d_g]
    TensorF rgcn_w0;                  // [h1, d_g]
    std::array<TensorF, 4> rgcn_wr;   // per relation, [h1, d_g]
    std::vector<GtHeadParams> gt;     // C heads
    TensorF head_kernel;  // [h2*C]
    TensorF head_bias;    // [1]
};

inline const std::array<std::string, 4> kRgcnRelationParamNames = {
    "rgcn.w_intra_past", "rgcn.w_intra_future", "rgcn.w_inter_past", "rgcn.w_inter_next"};

// Visits every parameter tensor in a fixed order; the order defines both the
// initialization stream and the checkpoint manifest.
template <typename Params, typename Fn>
void for_each_param(Params& p, Fn&& fn) {
    fn("patch_embed.kernel", p.patch_kernel);
    fn("patch_embed.bias", p.patch_bias);
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        auto& blk = p.blocks[b];
        const std::string prefix = "swin" + std::to_string(b) + ".";
        fn(prefix + "ln1.gamma", blk.ln1_gamma);
        fn(prefix + "ln1.beta", blk.ln1_beta);
        fn(prefix + "qkv.kernel", blk.qkv_kernel);
        fn(prefix + "qkv.bias", blk.qkv_bias);
        fn(prefix + "out.kernel", blk.out_kernel);
        fn(prefix + "out.bias", blk.out_bias);
        fn(prefix + "ln2.gamma", blk.ln2_gamma);
        fn(prefix + "ln2.beta", blk.ln2_beta);
        fn(prefix + "mlp1.kernel", blk.mlp1_kernel);
        fn(prefix + "mlp1.bias", blk.mlp1_bias);
        fn(prefix + "mlp2.kernel", blk.mlp2_kernel);
        fn(prefix + "mlp2.bias", blk.mlp2_bias);
    }
    fn("frame_encoder.kernel", p.frame_kernel);
    fn("frame_encoder.bias", p.frame_bias);
    fn("rgcn.w0", p.rgcn_w0);
    for (std::size_t r = 0; r < 4; ++r) fn(kRgcnRelationParamNames[r], p.rgcn_wr[r]);
    for (std::size_t c = 0; c < p.gt.size(); ++c) {
        const std::string prefix = "gt.head" + std::to_string(c) + ".";
        fn(prefix + "w1", p.gt[c].w1);
        fn(prefix + "w2", p.gt[c].w2);
        fn(prefix + "w3", p.gt[c].w3);
        fn(prefix + "w4", p.gt[c].w4);
    }
    fn("head.kernel", p.head_kernel);
    fn("head.bias", p.head_bias);
}

inline ModelParams make_param_skeleton(const ModelConfig& cfg) {
    const std::size_t D = static_cast<std::size_t>(cfg.embed_dim);
    const std::size_t in = 9 * static_cast<std::size_t>(cfg.patch) * cfg.patch;
    const std::size_t dg = static_cast<std::size_t>(cfg.node_dim);
    const std::size_t h1 = static_cast<std::size_t>(cfg.rgcn_hidden);
    const std::size_t h2 = static_cast<std::size_t>(cfg.gt_hidden);
    const std::size_t att = static_cast<std::size_t>(cfg.att_dim_effective());
    const std::size_t C = static_cast<std::size_t>(cfg.gt_heads);

    ModelParams p;
    p.patch_kernel = TensorF({D, in});
    p.patch_bias = TensorF({D});
    p.blocks.resize(static_cast<std::size_t>(cfg.swin_layers));
    for (auto& blk : p.blocks) {
        blk.ln1_gamma = TensorF({D});
        blk.ln1_beta = TensorF({D});
        blk.qkv_kernel = TensorF({3 * D, D});
        blk.qkv_bias = TensorF({3 * D});
        blk.out_kernel = TensorF({D, D});
        blk.out_bias = TensorF({D});
        blk.ln2_gamma = TensorF({D});
        blk.ln2_beta = TensorF({D});
        blk.mlp1_kernel = TensorF({4 * D, D});
        blk.mlp1_bias = TensorF({4 * D});
        blk.mlp2_kernel = TensorF({D, 4 * D});
        blk.mlp2_bias = TensorF({D});
    }
    p.frame_kernel = TensorF({dg, D});
    p.frame_bias = TensorF({dg});
    p.rgcn_w0 = TensorF({h1, dg});
    for (auto& w : p.rgcn_wr) w = TensorF({h1, dg});
    p.gt.resize(C);
    for (auto& head : p.gt) {
        head.w1 = TensorF({h2, h1});
        head.w2 = TensorF({h2, h1});
        head.w3 = TensorF({att, h1});
        head.w4 = TensorF({att, h1});
    }
    p.head_kernel = TensorF({h2 * C});
    p.head_bias = TensorF({1});
    return p;
}

// Fan-in variance scaling for every kernel; biases zero, LayerNorm scales one.
inline ModelParams init_params(const ModelConfig& cfg) {
    ModelParams p = make_param_skeleton(cfg);
    Rng rng = Rng::derive(cfg.seed, {0x706172616dULL});  // "param" stream tag
    for_each_param(p, [&](const std::string& name, TensorF& t) {
        const bool is_ln_gamma = name.find("gamma") != std::string::npos;
        const bool is_bias = name.find("bias") != std::string::npos ||
                             name.find("beta") != std::string::npos;
        if (is_ln_gamma) {
            for (auto& v : t.data) v = 1.0;
        } else if (is_bias) {
            // zero-filled already
        } else {
            const std::size_t fan_in = t.shape.size() == 2 ? t.shape[1] : t.shape[0];
            const double std_dev = std::sqrt(1.0 / static_cast<double>(fan_in));
            for (auto& v : t.data) v = std_dev * rng.gaussian();
        }
    });
    return p;
}

inline ModelParams make_zero_like(const ModelConfig& cfg) { return make_param_skeleton(cfg); }

namespace nn {

// y = W x (+ y0), W row-major [out, in]
inline void matvec(const TensorF& W, const double* x, double* y, bool accumulate = false) {
    const std::size_t rows = W.shape[0], cols = W.shape[1];
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = accumulate ? y[r] : 0.0;
        const double* wrow = W.data.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) acc += wrow[c] * x[c];
        y[r] = acc;
    }
}

// dx += W^T g
inline void matvec_transpose_acc(const TensorF& W, const double* g, double* dx) {
    const std::size_t rows = W.shape[0], cols = W.shape[1];
    for (std::size_t r = 0; r < rows; ++r) {
        const double* wrow = W.data.data() + r * cols;
        const double gr = g[r];
        for (std::size_t c = 0; c < cols; ++c) dx[c] += wrow[c] * gr;
    }
}

// dW += g x^T
inline void outer_acc(TensorF& dW, const double* g, const double* x) {
    const std::size_t rows = dW.shape[0], cols = dW.shape[1];
    for (std::size_t r = 0; r < rows; ++r) {
        double* wrow = dW.data.data() + r * cols;
        const double gr = g[r];
        for (std::size_t c = 0; c < cols; ++c) wrow[c] += gr * x[c];
    }
}

inline void add_acc(double* dst, const double* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

inline constexpr double kLnEps = 1e-5;

struct LayerNormCache {
    std::vector<double> xhat;     // [N*D]
    std::vector<double> inv_std;  // [N]
};

// Per-vector LayerNorm over the last dimension. gamma/beta may be null for
// the affine-free variant.
inline void layernorm_forward(const double* x, double* y, std::size_t N, std::size_t D,
                              const TensorF* gamma, const TensorF* beta, LayerNormCache* cache) {
    if (cache) {
        cache->xhat.resize(N * D);
        cache->inv_std.resize(N);
    }
    for (std::size_t n = 0; n < N; ++n) {
        const double* xn = x + n * D;
        double* yn = y + n * D;
        double mean = 0.0;
        for (std::size_t d = 0; d < D; ++d) mean += xn[d];
        mean /= static_cast<double>(D);
        double var = 0.0;
        for (std::size_t d = 0; d < D; ++d) var += (xn[d] - mean) * (xn[d] - mean);
        var /= static_cast<double>(D);
        const double inv_std = 1.0 / std::sqrt(var + kLnEps);
        for (std::size_t d = 0; d < D; ++d) {
            const double xhat = (xn[d] - mean) * inv_std;
            if (cache) cache->xhat[n * D + d] = xhat;
            yn[d] = gamma ? gamma->data[d] * xhat + beta->data[d] : xhat;
        }
        if (cache) cache->inv_std[n] = inv_std;
    }
}

inline void layernorm_backward(const LayerNormCache& cache, const double* gy, double* gx,
                               std::size_t N, std::size_t D, const TensorF* gamma,
                               TensorF* dgamma, TensorF* dbeta) {
    std::vector<double> gxhat(D);
    for (std::size_t n = 0; n < N; ++n) {
        const double* g = gy + n * D;
        const double* xhat = cache.xhat.data() + n * D;
        for (std::size_t d = 0; d < D; ++d) {
            gxhat[d] = gamma ? g[d] * gamma->data[d] : g[d];
            if (dgamma) dgamma->data[d] += g[d] * xhat[d];
            if (dbeta) dbeta->data[d] += g[d];
        }
        double sum_g = 0.0, sum_gx = 0.0;
        for (std::size_t d = 0; d < D; ++d) {
            sum_g += gxhat[d];
            sum_gx += gxhat[d] * xhat[d];
        }
        const double inv_D = 1.0 / static_cast<double>(D);
        for (std::size_t d = 0; d < D; ++d) {
            gx[n * D + d] =
                cache.inv_std[n] * (gxhat[d] - sum_g * inv_D - xhat[d] * sum_gx * inv_D);
        }
    }
}

inline double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * 0.7071067811865475244)); }

inline double gelu_grad(double x) {
    const double cdf = 0.5 * (1.0 + std::erf(x * 0.7071067811865475244));
    const double pdf = 0.3989422804014326779 * std::exp(-0.5 * x * x);
    return cdf + x * pdf;
}

}  // namespace nn

// ---------------------------------------------------------------------------
// patch embedding

struct PatchEmbedCache {
    std::size_t T = 0, Hp = 0, Wp = 0;
    std::vector<double> patches;  // [T*Hp*Wp, 9*patch^2]
    nn::LayerNormCache ln;
};

// Non-overlapping spatial patches, linear projection to D, additive fixed
// sinusoidal position code over (t, y, x), then LayerNorm (no affine).
inline TensorF patch_embed_forward(const FeatureClip& input, const ModelConfig& cfg,
                                   const ModelParams& params, PatchEmbedCache* cache) {
    cfg.validate_for(input.H, input.W);
    if (input.C != 9) throw std::invalid_argument("patch_embed: expected 9 channels");
    const std::size_t patch = static_cast<std::size_t>(cfg.patch);
    const std::size_t D = static_cast<std::size_t>(cfg.embed_dim);
    const std::size_t Hp = input.H / patch, Wp = input.W / patch;
    const std::size_t in_dim = 9 * patch * patch;
    const std::size_t n_tokens = input.T * Hp * Wp;

    std::vector<double> patches(n_tokens * in_dim);
    for (std::size_t t = 0; t < input.T; ++t)
        for (std::size_t py = 0; py < Hp; ++py)
            for (std::size_t px = 0; px < Wp; ++px) {
                double* dst = patches.data() + ((t * Hp + py) * Wp + px) * in_dim;
                std::size_t k = 0;
                for (std::size_t dy = 0; dy < patch; ++dy)
                    for (std::size_t dx = 0; dx < patch; ++dx)
                        for (std::size_t c = 0; c < 9; ++c)
                            dst[k++] = input.at(t, py * patch + dy, px * patch + dx, c);
            }

    // sinusoidal code per axis, summed
    const auto pos_code = [&](std::size_t pos, std::size_t d) {
        const std::size_t pair = d / 2;
        const double rate = std::pow(10000.0, -2.0 * static_cast<double>(pair) / static_cast<double>(D));
        const double angle = static_cast<double>(pos) * rate;
        return (d % 2 == 0) ? std::sin(angle) : std::cos(angle);
    };

    std::vector<double> pre_ln(n_tokens * D);
    for (std::size_t t = 0; t < input.T; ++t)
        for (std::size_t py = 0; py < Hp; ++py)
            for (std::size_t px = 0; px < Wp; ++px) {
                const std::size_t tok = (t * Hp + py) * Wp + px;
                double* out = pre_ln.data() + tok * D;
                nn::matvec(params.patch_kernel, patches.data() + tok * in_dim, out);
                for (std::size_t d = 0; d < D; ++d)
                    out[d] += params.patch_bias.data[d] + pos_code(t, d) + pos_code(py, d) +
                              pos_code(px, d);
            }

    TensorF out({input.T, Hp, Wp, D});
    nn::layernorm_forward(pre_ln.data(), out.data.data(), n_tokens, D, nullptr, nullptr,
                          cache ? &cache->ln : nullptr);
    if (cache) {
        cache->T = input.T;
        cache->Hp = Hp;
        cache->Wp = Wp;
        cache->patches = std::move(patches);
    }
    return out;
}

inline void patch_embed_backward(const PatchEmbedCache& cache, const TensorF& grad_out,
                                 const ModelConfig& cfg, const ModelParams& params,
                                 ModelParams& grads) {
    const std::size_t D = static_cast<std::size_t>(cfg.embed_dim);
    const std::size_t in_dim = params.patch_kernel.shape[1];
    const std::size_t n_tokens = cache.T * cache.Hp * cache.Wp;
    std::vector<double> g_pre(n_tokens * D);
    nn::layernorm_backward(cache.ln, grad_out.data.data(), g_pre.data(), n_tokens, D, nullptr,
                           nullptr, nullptr);
    for (std::size_t tok = 0; tok < n_tokens; ++tok) {
        const double* g = g_pre.data() + tok * D;
        nn::outer_acc(grads.patch_kernel, g, cache.patches.data() + tok * in_dim);
        nn::add_acc(grads.patch_bias.data.data(), g, D);
    }
}

// ---------------------------------------------------------------------------
// swin block

struct SwinBlockCache {
    std::size_t T = 0, Hp = 0, Wp = 0;
    int shift = 0;
    TensorF x_shifted;                 // block input after cyclic shift
    nn::LayerNormCache ln1;
    std::vector<double> ln1_out;       // [N*D]
    std::vector<double> qkv;           // [N*3D]
    std::vector<double> attn_weights;  // per window/head/query: [n] softmaxed
    std::vector<double> attn_concat;   // [N*D]
    std::vector<double> y;             // after attention residual (shifted coords)
    nn::LayerNormCache ln2;
    std::vector<double> ln2_out;       // [N*D]
    std::vector<double> mlp_hidden;    // [N*4D] pre-activation
};

namespace nn {

// dst[(t,y,x)] = src[(t, (y+sy) mod Hp, (x+sx) mod Wp)]
inline void cyclic_shift(const double* src, double* dst, std::size_t T, std::size_t Hp,
                         std::size_t Wp, std::size_t D, long sy, long sx) {
    const long h = static_cast<long>(Hp), w = static_cast<long>(Wp);
    for (std::size_t t = 0; t < T; ++t)
        for (long y = 0; y < h; ++y)
            for (long x = 0; x < w; ++x) {
                const long yy = ((y + sy) % h + h) % h;
                const long xx = ((x + sx) % w + w) % w;
                const double* s = src + ((t * Hp + static_cast<std::size_t>(yy)) * Wp +
                                         static_cast<std::size_t>(xx)) * D;
                double* d = dst + ((t * Hp + static_cast<std::size_t>(y)) * Wp +
                                   static_cast<std::size_t>(x)) * D;
                for (std::size_t k = 0; k < D; ++k) d[k] = s[k];
            }
}

}  // namespace nn

// Pre-LN windowed multi-head self-attention within each frame (odd blocks use
// a half-window cyclic shift), then a pre-LN GELU MLP; both residual.
inline TensorF swin_block_forward(const TensorF& tokens, int block_index, const ModelConfig& cfg,
                                  const SwinBlockParams& blk, SwinBlockCache* cache) {
    const std::size_t T = tokens.shape[0], Hp = tokens.shape[1], Wp = tokens.shape[2],
                      D = tokens.shape[3];
    const std::size_t heads = static_cast<std::size_t>(cfg.swin_heads);
    const std::size_t hd = D / heads;
    const std::size_t win = static_cast<std::size_t>(cfg.window);
    const std::size_t n_tok = Hp * Wp;
    const std::size_t N = T * n_tok;
    const std::size_t n = win * win;  // tokens per window
    const int shift = (block_index % 2 == 1) ? static_cast<int>(win / 2) : 0;
    const double scale = 1.0 / std::sqrt(static_cast<double>(hd));

    TensorF x_shifted({T, Hp, Wp, D});
    nn::cyclic_shift(tokens.data.data(), x_shifted.data.data(), T, Hp, Wp, D, shift, shift);

    SwinBlockCache local;
    SwinBlockCache& c = cache ? *cache : local;
    c.T = T;
    c.Hp = Hp;
    c.Wp = Wp;
    c.shift = shift;
    c.x_shifted = x_shifted;

    c.ln1_out.resize(N * D);
    nn::layernorm_forward(x_shifted.data.data(), c.ln1_out.data(), N, D, &blk.ln1_gamma,
                          &blk.ln1_beta, &c.ln1);

    c.qkv.resize(N * 3 * D);
    for (std::size_t i = 0; i < N; ++i) {
        nn::matvec(blk.qkv_kernel, c.ln1_out.data() + i * D, c.qkv.data() + i * 3 * D);
        for (std::size_t d = 0; d < 3 * D; ++d) c.qkv[i * 3 * D + d] += blk.qkv_bias.data[d];
    }

    const std::size_t wy_count = Hp / win, wx_count = Wp / win;
    c.attn_weights.assign(T * wy_count * wx_count * heads * n * n, 0.0);
    c.attn_concat.assign(N * D, 0.0);

    std::vector<std::size_t> idx(n);
    std::vector<double> scores(n);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t wy = 0; wy < wy_count; ++wy)
            for (std::size_t wx = 0; wx < wx_count; ++wx) {
                for (std::size_t iy = 0; iy < win; ++iy)
                    for (std::size_t ix = 0; ix < win; ++ix)
                        idx[iy * win + ix] =
                            (t * Hp + wy * win + iy) * Wp + wx * win + ix;
                const std::size_t w_base =
                    (((t * wy_count + wy) * wx_count + wx) * heads) * n * n;
                for (std::size_t h = 0; h < heads; ++h) {
                    for (std::size_t qi = 0; qi < n; ++qi) {
                        const double* q = c.qkv.data() + idx[qi] * 3 * D + h * hd;
                        double max_s = -1e300;
                        for (std::size_t kj = 0; kj < n; ++kj) {
                            const double* k = c.qkv.data() + idx[kj] * 3 * D + D + h * hd;
                            double s = 0.0;
                            for (std::size_t d = 0; d < hd; ++d) s += q[d] * k[d];
                            scores[kj] = s * scale;
                            max_s = std::max(max_s, scores[kj]);
                        }
                        double denom = 0.0;
                        for (std::size_t kj = 0; kj < n; ++kj) {
                            scores[kj] = std::exp(scores[kj] - max_s);
                            denom += scores[kj];
                        }
                        double* alpha = c.attn_weights.data() + w_base + (h * n + qi) * n;
                        double* out = c.attn_concat.data() + idx[qi] * D + h * hd;
                        for (std::size_t kj = 0; kj < n; ++kj) {
                            alpha[kj] = scores[kj] / denom;
                            const double* v = c.qkv.data() + idx[kj] * 3 * D + 2 * D + h * hd;
                            for (std::size_t d = 0; d < hd; ++d) out[d] += alpha[kj] * v[d];
                        }
                    }
                }
            }

    // attention output projection + residual
    c.y.resize(N * D);
    for (std::size_t i = 0; i < N; ++i) {
        double* y = c.y.data() + i * D;
        nn::matvec(blk.out_kernel, c.attn_concat.data() + i * D, y);
        for (std::size_t d = 0; d < D; ++d)
            y[d] += blk.out_bias.data[d] + c.x_shifted.data[i * D + d];
    }

    // MLP with residual
    c.ln2_out.resize(N * D);
    nn::layernorm_forward(c.y.data(), c.ln2_out.data(), N, D, &blk.ln2_gamma, &blk.ln2_beta,
                          &c.ln2);
    c.mlp_hidden.resize(N * 4 * D);
    TensorF out_shifted({T, Hp, Wp, D});
    std::vector<double> hidden_act(4 * D);
    for (std::size_t i = 0; i < N; ++i) {
        double* hid = c.mlp_hidden.data() + i * 4 * D;
        nn::matvec(blk.mlp1_kernel, c.ln2_out.data() + i * D, hid);
        for (std::size_t d = 0; d < 4 * D; ++d) {
            hid[d] += blk.mlp1_bias.data[d];
            hidden_act[d] = nn::gelu(hid[d]);
        }
        double* o = out_shifted.data.data() + i * D;
        nn::matvec(blk.mlp2_kernel, hidden_act.data(), o);
        for (std::size_t d = 0; d < D; ++d) o[d] += blk.mlp2_bias.data[d] + c.y[i * D + d];
    }

    TensorF out({T, Hp, Wp, D});
    nn::cyclic_shift(out_shifted.data.data(), out.data.data(), T, Hp, Wp, D, -shift, -shift);
    return out;
}

inline TensorF swin_block_backward(const SwinBlockCache& c, const TensorF& grad_out,
                                   const ModelConfig& cfg, const SwinBlockParams& blk,
                                   SwinBlockParams& grads) {
    const std::size_t T = c.T, Hp = c.Hp, Wp = c.Wp;
    const std::size_t D = static_cast<std::size_t>(cfg.embed_dim);
    const std::size_t heads = static_cast<std::size_t>(cfg.swin_heads);
    const std::size_t hd = D / heads;
    const std::size_t win = static_cast<std::size_t>(cfg.window);
    const std::size_t N = T * Hp * Wp;
    const std::size_t n = win * win;
    const double scale = 1.0 / std::sqrt(static_cast<double>(hd));

    // move the incoming gradient into shifted coordinates
    std::vector<double> g_out(N * D);
    nn::cyclic_shift(grad_out.data.data(), g_out.data(), T, Hp, Wp, D, c.shift, c.shift);

    // MLP backward
    std::vector<double> g_y(N * D, 0.0);       // grad wrt y (attention residual output)
    std::vector<double> g_ln2(N * D, 0.0);
    std::vector<double> hidden_act(4 * D), g_hidden(4 * D);
    for (std::size_t i = 0; i < N; ++i) {
        const double* g = g_out.data() + i * D;
        nn::add_acc(g_y.data() + i * D, g, D);  // residual path
        const double* hid = c.mlp_hidden.data() + i * 4 * D;
        for (std::size_t d = 0; d < 4 * D; ++d) hidden_act[d] = nn::gelu(hid[d]);
        nn::outer_acc(grads.mlp2_kernel, g, hidden_act.data());
        nn::add_acc(grads.mlp2_bias.data.data(), g, D);
        std::fill(g_hidden.begin(), g_hidden.end(), 0.0);
        nn::matvec_transpose_acc(blk.mlp2_kernel, g, g_hidden.data());
        for (std::size_t d = 0; d < 4 * D; ++d) g_hidden[d] *= nn::gelu_grad(hid[d]);
        nn::outer_acc(grads.mlp1_kernel, g_hidden.data(), c.ln2_out.data() + i * D);
        nn::add_acc(grads.mlp1_bias.data.data(), g_hidden.data(), 4 * D);
        nn::matvec_transpose_acc(blk.mlp1_kernel, g_hidden.data(), g_ln2.data() + i * D);
    }
    std::vector<double> g_y_from_ln2(N * D);
    nn::layernorm_backward(c.ln2, g_ln2.data(), g_y_from_ln2.data(), N, D, &blk.ln2_gamma,
                           &grads.ln2_gamma, &grads.ln2_beta);
    nn::add_acc(g_y.data(), g_y_from_ln2.data(), N * D);

    // attention output projection backward
    std::vector<double> g_concat(N * D, 0.0);
    std::vector<double> g_x(N * D, 0.0);  // grad wrt shifted block input
    for (std::size_t i = 0; i < N; ++i) {
        const double* g = g_y.data() + i * D;
        nn::add_acc(g_x.data() + i * D, g, D);  // residual path
        nn::outer_acc(grads.out_kernel, g, c.attn_concat.data() + i * D);
        nn::add_acc(grads.out_bias.data.data(), g, D);
        nn::matvec_transpose_acc(blk.out_kernel, g, g_concat.data() + i * D);
    }

    // attention core backward
    std::vector<double> g_qkv(N * 3 * D, 0.0);
    const std::size_t wy_count = Hp / win, wx_count = Wp / win;
    std::vector<std::size_t> idx(n);
    std::vector<double> d_alpha(n), d_score(n);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t wy = 0; wy < wy_count; ++wy)
            for (std::size_t wx = 0; wx < wx_count; ++wx) {
                for (std::size_t iy = 0; iy < win; ++iy)
                    for (std::size_t ix = 0; ix < win; ++ix)
                        idx[iy * win + ix] =
                            (t * Hp + wy * win + iy) * Wp + wx * win + ix;
                const std::size_t w_base =
                    (((t * wy_count + wy) * wx_count + wx) * heads) * n * n;
                for (std::size_t h = 0; h < heads; ++h) {
                    for (std::size_t qi = 0; qi < n; ++qi) {
                        const double* g_o = g_concat.data() + idx[qi] * D + h * hd;
                        const double* alpha = c.attn_weights.data() + w_base + (h * n + qi) * n;
                        double dot = 0.0;
                        for (std::size_t kj = 0; kj < n; ++kj) {
                            const double* v = c.qkv.data() + idx[kj] * 3 * D + 2 * D + h * hd;
                            double da = 0.0;
                            for (std::size_t d = 0; d < hd; ++d) da += g_o[d] * v[d];
                            d_alpha[kj] = da;
                            dot += da * alpha[kj];
                            // dV
                            double* gv = g_qkv.data() + idx[kj] * 3 * D + 2 * D + h * hd;
                            for (std::size_t d = 0; d < hd; ++d) gv[d] += alpha[kj] * g_o[d];
                        }
                        for (std::size_t kj = 0; kj < n; ++kj)
                            d_score[kj] = alpha[kj] * (d_alpha[kj] - dot);
                        const double* q = c.qkv.data() + idx[qi] * 3 * D + h * hd;
                        double* gq = g_qkv.data() + idx[qi] * 3 * D + h * hd;
                        for (std::size_t kj = 0; kj < n; ++kj) {
                            const double* k = c.qkv.data() + idx[kj] * 3 * D + D + h * hd;
                            double* gk = g_qkv.data() + idx[kj] * 3 * D + D + h * hd;
                            const double ds = d_score[kj] * scale;
                            for (std::size_t d = 0; d < hd; ++d) {
                                gq[d] += ds * k[d];
                                gk[d] += ds * q[d];
                            }
                        }
                    }
                }
            }

    // QKV projection backward
    std::vector<double> g_ln1(N * D, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        const double* g = g_qkv.data() + i * 3 * D;
        nn::outer_acc(grads.qkv_kernel, g, c.ln1_out.data() + i * D);
        nn::add_acc(grads.qkv_bias.data.data(), g, 3 * D);
        nn::matvec_transpose_acc(blk.qkv_kernel, g, g_ln1.data() + i * D);
    }
    std::vector<double> g_x_from_ln1(N * D);
    nn::layernorm_backward(c.ln1, g_ln1.data(), g_x_from_ln1.data(), N, D, &blk.ln1_gamma,
                           &grads.ln1_gamma, &grads.ln1_beta);
    nn::add_acc(g_x.data(), g_x_from_ln1.data(), N * D);

    TensorF grad_in({T, Hp, Wp, D});
    nn::cyclic_shift(g_x.data(), grad_in.data.data(), T, Hp, Wp, D, -c.shift, -c.shift);
    return grad_in;
}

// ---------------------------------------------------------------------------
// frame encoder

struct FrameEncodeCache {
    std::size_t T = 0, n_tok = 0;
    std::vector<std::size_t> token_shape;
    std::vector<double> pooled;  // [T, D]
};

// Spatial average pool per frame, then a linear projection D -> d_g.
inline TensorF frame_encode_forward(const TensorF& tokens, const ModelParams& params,
                                    FrameEncodeCache* cache) {
    const std::size_t T = tokens.shape[0];
    const std::size_t n_tok = tokens.shape[1] * tokens.shape[2];
    const std::size_t D = tokens.shape[3];
    const std::size_t dg = params.frame_kernel.shape[0];
    std::vector<double> pooled(T * D, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t i = 0; i < n_tok; ++i)
            nn::add_acc(pooled.data() + t * D, tokens.data.data() + (t * n_tok + i) * D, D);
        for (std::size_t d = 0; d < D; ++d) pooled[t * D + d] /= static_cast<double>(n_tok);
    }
    TensorF out({T, dg});
    for (std::size_t t = 0; t < T; ++t) {
        nn::matvec(params.frame_kernel, pooled.data() + t * D, out.data.data() + t * dg);
        for (std::size_t d = 0; d < dg; ++d) out.data[t * dg + d] += params.frame_bias.data[d];
    }
    if (cache) {
        cache->T = T;
        cache->n_tok = n_tok;
        cache->token_shape = tokens.shape;
        cache->pooled = std::move(pooled);
    }
    return out;
}

inline TensorF frame_encode_backward(const FrameEncodeCache& cache, const TensorF& grad_out,
                                     const ModelParams& params, ModelParams& grads) {
    const std::size_t T = cache.T, n_tok = cache.n_tok;
    const std::size_t D = params.frame_kernel.shape[1];
    const std::size_t dg = params.frame_kernel.shape[0];
    TensorF grad_in(cache.token_shape);
    std::vector<double> g_pool(D);
    for (std::size_t t = 0; t < T; ++t) {
        const double* g = grad_out.data.data() + t * dg;
        nn::outer_acc(grads.frame_kernel, g, cache.pooled.data() + t * D);
        nn::add_acc(grads.frame_bias.data.data(), g, dg);
        std::fill(g_pool.begin(), g_pool.end(), 0.0);
        nn::matvec_transpose_acc(params.frame_kernel, g, g_pool.data());
        const double inv = 1.0 / static_cast<double>(n_tok);
        for (std::size_t i = 0; i < n_tok; ++i)
            for (std::size_t d = 0; d < D; ++d)
                grad_in.data[(t * n_tok + i) * D + d] = g_pool[d] * inv;
    }
    return grad_in;
}

// ---------------------------------------------------------------------------
// relational graph convolution

struct RgcnCache {
    std::size_t T = 0;
    TensorF input;                       // [T, d_g]
    std::array<TensorF, 4> aggregates;   // mean neighbor feature per relation, [T, d_g]
    TensorF pre_activation;              // [T, h1]
    bool relu = true;
};

// g_i = W0 x_i + sum_r (1/|N_r(i)|) sum_{j in N_r(i)} W_r x_j, followed by an
// optional pointwise ReLU. Empty neighbor sets contribute nothing.
inline TensorF rgcn_forward(const TensorF& X, const RelGraph& graph, const ModelParams& params,
                            bool relu, RgcnCache* cache) {
    const std::size_t T = X.shape[0];
    const std::size_t dg = X.shape[1];
    const std::size_t h1 = params.rgcn_w0.shape[0];
    if (static_cast<int>(T) != graph.T) throw std::invalid_argument("rgcn: node/graph mismatch");
    if (params.rgcn_w0.shape[1] != dg) throw std::invalid_argument("rgcn: feature dim mismatch");

    std::array<TensorF, 4> agg;
    for (auto& a : agg) a = TensorF({T, dg});
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t i = 0; i < T; ++i) {
            const auto& nbrs = graph.neighbor_lists[r][i];
            if (nbrs.empty()) continue;
            double* a = agg[r].data.data() + i * dg;
            for (int j : nbrs)
                nn::add_acc(a, X.data.data() + static_cast<std::size_t>(j - 1) * dg, dg);
            const double inv = 1.0 / static_cast<double>(nbrs.size());
            for (std::size_t d = 0; d < dg; ++d) a[d] *= inv;
        }
    }

    TensorF pre({T, h1});
    for (std::size_t i = 0; i < T; ++i) {
        double* out = pre.data.data() + i * h1;
        nn::matvec(params.rgcn_w0, X.data.data() + i * dg, out);
        for (std::size_t r = 0; r < 4; ++r) {
            if (graph.neighbor_lists[r][i].empty()) continue;
            nn::matvec(params.rgcn_wr[r], agg[r].data.data() + i * dg, out, /*accumulate=*/true);
        }
    }

    TensorF out = pre;
    if (relu) {
        for (auto& v : out.data) v = std::max(0.0, v);
    }
    if (cache) {
        cache->T = T;
        cache->input = X;
        cache->aggregates = std::move(agg);
        cache->pre_activation = std::move(pre);
        cache->relu = relu;
    }
    return out;
}

inline TensorF rgcn_backward(const RgcnCache& cache, const TensorF& grad_out,
                             const RelGraph& graph, const ModelParams& params,
                             ModelParams& grads) {
    const std::size_t T = cache.T;
    const std::size_t dg = cache.input.shape[1];
    const std::size_t h1 = params.rgcn_w0.shape[0];

    TensorF g = grad_out;
    if (cache.relu) {
        for (std::size_t i = 0; i < g.data.size(); ++i)
            if (cache.pre_activation.data[i] <= 0.0) g.data[i] = 0.0;
    }

    TensorF grad_in({T, dg});
    std::vector<double> back(dg);
    for (std::size_t i = 0; i < T; ++i) {
        const double* gi = g.data.data() + i * h1;
        nn::outer_acc(grads.rgcn_w0, gi, cache.input.data.data() + i * dg);
        nn::matvec_transpose_acc(params.rgcn_w0, gi, grad_in.data.data() + i * dg);
        for (std::size_t r = 0; r < 4; ++r) {
            const auto& nbrs = graph.neighbor_lists[r][i];
            if (nbrs.empty()) continue;
            nn::outer_acc(grads.rgcn_wr[r], gi, cache.aggregates[r].data.data() + i * dg);
            std::fill(back.begin(), back.end(), 0.0);
            nn::matvec_transpose_acc(params.rgcn_wr[r], gi, back.data());
            const double inv = 1.0 / static_cast<double>(nbrs.size());
            for (int j : nbrs) {
                double* dst = grad_in.data.data() + static_cast<std::size_t>(j - 1) * dg;
                for (std::size_t d = 0; d < dg; ++d) dst[d] += back[d] * inv;
            }
        }
    }
    return grad_in;
}

// ---------------------------------------------------------------------------
// graph transformer

struct GraphTransformerCache {
    std::size_t T = 0;
    TensorF input;                              // [T, h1]
    std::vector<std::vector<int>> union_nbrs;   // 0-based rows per node
    // per head: projections and attention rows
    std::vector<TensorF> u, w, m;               // each [T, att] / [T, att] / [T, h2]
    std::vector<std::vector<std::vector<double>>> alpha;  // [head][i][|N(i)|]
};

// Ascending union of the four relation neighbor sets, as 0-based row ids.
inline std::vector<std::vector<int>> union_neighbors(const RelGraph& graph) {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(graph.T));
    for (int i = 1; i <= graph.T; ++i) {
        auto& dst = out[static_cast<std::size_t>(i - 1)];
        for (const auto& lists : graph.neighbor_lists) {
            for (int j : lists[static_cast<std::size_t>(i - 1)]) dst.push_back(j - 1);
        }
        std::sort(dst.begin(), dst.end());
        dst.erase(std::unique(dst.begin(), dst.end()), dst.end());
    }
    return out;
}

// Per head c: o_i = W1 g_i + sum_j alpha_ij W2 g_j with scaled dot-product
// attention over the union neighborhood; heads are concatenated. Nodes
// without neighbors emit W1 g_i alone.
inline TensorF graph_transformer_forward(const TensorF& G, const RelGraph& graph,
                                         const ModelConfig& cfg, const ModelParams& params,
                                         GraphTransformerCache* cache) {
    const std::size_t T = G.shape[0];
    const std::size_t h1 = G.shape[1];
    const std::size_t h2 = static_cast<std::size_t>(cfg.gt_hidden);
    const std::size_t att = static_cast<std::size_t>(cfg.att_dim_effective());
    const std::size_t C = static_cast<std::size_t>(cfg.gt_heads);
    if (static_cast<int>(T) != graph.T)
        throw std::invalid_argument("graph_transformer: node/graph mismatch");
    if (params.gt.at(0).w1.shape[1] != h1)
        throw std::invalid_argument("graph_transformer: feature dim mismatch");
    const double scale = 1.0 / std::sqrt(static_cast<double>(att));

    GraphTransformerCache local;
    GraphTransformerCache& c = cache ? *cache : local;
    c.T = T;
    c.input = G;
    c.union_nbrs = union_neighbors(graph);
    c.u.assign(C, TensorF({T, att}));
    c.w.assign(C, TensorF({T, att}));
    c.m.assign(C, TensorF({T, h2}));
    c.alpha.assign(C, {});

    TensorF out({T, h2 * C});
    std::vector<double> scores;
    for (std::size_t head = 0; head < C; ++head) {
        const auto& hp = params.gt[head];
        auto& u = c.u[head];
        auto& w = c.w[head];
        auto& m = c.m[head];
        for (std::size_t i = 0; i < T; ++i) {
            nn::matvec(hp.w3, G.data.data() + i * h1, u.data.data() + i * att);
            nn::matvec(hp.w4, G.data.data() + i * h1, w.data.data() + i * att);
            nn::matvec(hp.w2, G.data.data() + i * h1, m.data.data() + i * h2);
        }
        c.alpha[head].assign(T, {});
        for (std::size_t i = 0; i < T; ++i) {
            double* o = out.data.data() + i * h2 * C + head * h2;
            nn::matvec(hp.w1, G.data.data() + i * h1, o);
            const auto& nbrs = c.union_nbrs[i];
            if (nbrs.empty()) continue;
            scores.resize(nbrs.size());
            double max_s = -1e300;
            for (std::size_t jn = 0; jn < nbrs.size(); ++jn) {
                const double* ui = u.data.data() + i * att;
                const double* wj = w.data.data() + static_cast<std::size_t>(nbrs[jn]) * att;
                double s = 0.0;
                for (std::size_t d = 0; d < att; ++d) s += ui[d] * wj[d];
                scores[jn] = s * scale;
                max_s = std::max(max_s, scores[jn]);
            }
            double denom = 0.0;
            for (auto& s : scores) {
                s = std::exp(s - max_s);
                denom += s;
            }
            auto& alpha_row = c.alpha[head][i];
            alpha_row.resize(nbrs.size());
            for (std::size_t jn = 0; jn < nbrs.size(); ++jn) {
                alpha_row[jn] = scores[jn] / denom;
                const double* mj = m.data.data() + static_cast<std::size_t>(nbrs[jn]) * h2;
                for (std::size_t d = 0; d < h2; ++d) o[d] += alpha_row[jn] * mj[d];
            }
        }
    }
    return out;
}

inline TensorF graph_transformer_backward(const GraphTransformerCache& c, const TensorF& grad_out,
                                          const ModelConfig& cfg, const ModelParams& params,
                                          ModelParams& grads) {
    const std::size_t T = c.T;
    const std::size_t h1 = c.input.shape[1];
    const std::size_t h2 = static_cast<std::size_t>(cfg.gt_hidden);
    const std::size_t att = static_cast<std::size_t>(cfg.att_dim_effective());
    const std::size_t C = static_cast<std::size_t>(cfg.gt_heads);
    const double scale = 1.0 / std::sqrt(static_cast<double>(att));

    TensorF grad_in({T, h1});
    for (std::size_t head = 0; head < C; ++head) {
        const auto& hp = params.gt[head];
        auto& hg = grads.gt[head];
        const auto& u = c.u[head];
        const auto& w = c.w[head];
        const auto& m = c.m[head];
        TensorF g_u({T, att}), g_w({T, att}), g_m({T, h2});
        std::vector<double> d_alpha, d_score;
        for (std::size_t i = 0; i < T; ++i) {
            const double* go = grad_out.data.data() + i * h2 * C + head * h2;
            nn::outer_acc(hg.w1, go, c.input.data.data() + i * h1);
            nn::matvec_transpose_acc(hp.w1, go, grad_in.data.data() + i * h1);
            const auto& nbrs = c.union_nbrs[i];
            if (nbrs.empty()) continue;
            const auto& alpha_row = c.alpha[head][i];
            d_alpha.resize(nbrs.size());
            d_score.resize(nbrs.size());
            double dot = 0.0;
            for (std::size_t jn = 0; jn < nbrs.size(); ++jn) {
                const std::size_t j = static_cast<std::size_t>(nbrs[jn]);
                const double* mj = m.data.data() + j * h2;
                double da = 0.0;
                for (std::size_t d = 0; d < h2; ++d) da += go[d] * mj[d];
                d_alpha[jn] = da;
                dot += da * alpha_row[jn];
                double* gm = g_m.data.data() + j * h2;
                for (std::size_t d = 0; d < h2; ++d) gm[d] += alpha_row[jn] * go[d];
            }
            for (std::size_t jn = 0; jn < nbrs.size(); ++jn)
                d_score[jn] = alpha_row[jn] * (d_alpha[jn] - dot);
            const double* ui = u.data.data() + i * att;
            double* gu = g_u.data.data() + i * att;
            for (std::size_t jn = 0; jn < nbrs.size(); ++jn) {
                const std::size_t j = static_cast<std::size_t>(nbrs[jn]);
                const double* wj = w.data.data() + j * att;
                double* gw = g_w.data.data() + j * att;
                const double ds = d_score[jn] * scale;
                for (std::size_t d = 0; d < att; ++d) {
                    gu[d] += ds * wj[d];
                    gw[d] += ds * ui[d];
                }
            }
        }
        // fold projection grads back to parameters and input
        for (std::size_t i = 0; i < T; ++i) {
            const double* xi = c.input.data.data() + i * h1;
            double* gi = grad_in.data.data() + i * h1;
            nn::outer_acc(hg.w3, g_u.data.data() + i * att, xi);
            nn::matvec_transpose_acc(hp.w3, g_u.data.data() + i * att, gi);
            nn::outer_acc(hg.w4, g_w.data.data() + i * att, xi);
            nn::matvec_transpose_acc(hp.w4, g_w.data.data() + i * att, gi);
            nn::outer_acc(hg.w2, g_m.data.data() + i * h2, xi);
            nn::matvec_transpose_acc(hp.w2, g_m.data.data() + i * h2, gi);
        }
    }
    return grad_in;
}

// ---------------------------------------------------------------------------
// predictor head and loss

struct HeadCache {
    TensorF input;  // [T, h2*C]
};

// Shared scalar linear map per node; outputs concatenated in time order.
inline std::vector<double> predictor_head_forward(const TensorF& O, const ModelParams& params,
                                                  HeadCache* cache) {
    const std::size_t T = O.shape[0];
    const std::size_t dim = O.shape[1];
    if (params.head_kernel.shape[0] != dim)
        throw std::invalid_argument("predictor_head: dim mismatch");
    std::vector<double> pred(T);
    for (std::size_t t = 0; t < T; ++t) {
        double acc = params.head_bias.data[0];
        const double* o = O.data.data() + t * dim;
        for (std::size_t d = 0; d < dim; ++d) acc += params.head_kernel.data[d] * o[d];
        pred[t] = acc;
    }
    if (cache) cache->input = O;
    return pred;
}

inline TensorF predictor_head_backward(const HeadCache& cache, const std::vector<double>& grad_pred,
                                       const ModelParams& params, ModelParams& grads) {
    const std::size_t T = cache.input.shape[0];
    const std::size_t dim = cache.input.shape[1];
    TensorF grad_in({T, dim});
    for (std::size_t t = 0; t < T; ++t) {
        const double g = grad_pred[t];
        const double* o = cache.input.data.data() + t * dim;
        grads.head_bias.data[0] += g;
        for (std::size_t d = 0; d < dim; ++d) {
            grads.head_kernel.data[d] += g * o[d];
            grad_in.data[t * dim + d] = g * params.head_kernel.data[d];
        }
    }
    return grad_in;
}

struct LossResult {
    double loss = 0.0;
    std::vector<double> grad_wrt_pred;
};

// loss = 1 - pearson(pred, gt), with the analytic gradient wrt pred.
inline LossResult neg_pearson_loss(std::span<const double> pred, std::span<const double> gt) {
    if (pred.size() != gt.size() || pred.size() < 2)
        throw std::invalid_argument("neg_pearson_loss: bad lengths");
    const std::size_t T = pred.size();
    const double mp = mean_of(pred);
    const double mg = mean_of(gt);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        const double dx = pred[t] - mp;
        const double dy = gt[t] - mg;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw std::domain_error("flat signal");
    const double denom = std::sqrt(sxx) * std::sqrt(syy);
    const double r = sxy / denom;
    LossResult res;
    res.loss = 1.0 - r;
    res.grad_wrt_pred.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
        const double dx = pred[t] - mp;
        const double dy = gt[t] - mg;
        res.grad_wrt_pred[t] = -(dy / denom - r * dx / sxx);
    }
    return res;
}

// ---------------------------------------------------------------------------
// full model

struct ForwardCache {
    PatchEmbedCache patch;
    std::vector<SwinBlockCache> blocks;
    FrameEncodeCache frame;
    RgcnCache rgcn;
    GraphTransformerCache gt;
    HeadCache head;
};

inline BvpSeries model_forward(const FeatureClip& input, const RelGraph& graph,
                               const ModelConfig& cfg, const ModelParams& params,
                               ForwardCache* cache) {
    if (static_cast<int>(input.T) != graph.T)
        throw std::invalid_argument("model_forward: clip length / graph mismatch");
    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;
    c.blocks.resize(static_cast<std::size_t>(cfg.swin_layers));

    TensorF tokens = patch_embed_forward(input, cfg, params, &c.patch);
    if (cfg.check_finite) tokens.check_finite("patch_embed");
    for (int b = 0; b < cfg.swin_layers; ++b) {
        tokens = swin_block_forward(tokens, b, cfg, params.blocks[static_cast<std::size_t>(b)],
                                    &c.blocks[static_cast<std::size_t>(b)]);
        if (cfg.check_finite) tokens.check_finite("swin" + std::to_string(b));
    }
    TensorF nodes = frame_encode_forward(tokens, params, &c.frame);
    if (cfg.check_finite) nodes.check_finite("frame_encoder");
    TensorF g = rgcn_forward(nodes, graph, params, cfg.relu_after_rgcn, &c.rgcn);
    if (cfg.check_finite) g.check_finite("rgcn");
    TensorF o = graph_transformer_forward(g, graph, cfg, params, &c.gt);
    if (cfg.check_finite) o.check_finite("graph_transformer");
    std::vector<double> pred = predictor_head_forward(o, params, &c.head);
    for (double v : pred) {
        if (cfg.check_finite && !std::isfinite(v))
            throw std::runtime_error("non-finite value in prediction");
    }
    return BvpSeries(std::move(pred), input.fps);
}

inline void model_backward(const ForwardCache& c, const std::vector<double>& grad_pred,
                           const RelGraph& graph, const ModelConfig& cfg,
                           const ModelParams& params, ModelParams& grads) {
    TensorF g = predictor_head_backward(c.head, grad_pred, params, grads);
    g = graph_transformer_backward(c.gt, g, cfg, params, grads);
    g = rgcn_backward(c.rgcn, g, graph, params, grads);
    g = frame_encode_backward(c.frame, g, params, grads);
    for (int b = cfg.swin_layers - 1; b >= 0; --b) {
        g = swin_block_backward(c.blocks[static_cast<std::size_t>(b)], g, cfg,
                                params.blocks[static_cast<std::size_t>(b)],
                                grads.blocks[static_cast<std::size_t>(b)]);
    }
    patch_embed_backward(c.patch, g, cfg, params, grads);
}

}  // namespace reperio
