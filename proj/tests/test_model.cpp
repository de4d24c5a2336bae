#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "reperio/graph.hpp"
#include "reperio/neural.hpp"

using namespace reperio;

namespace {

ModelConfig tiny_config() {
    ModelConfig cfg;
    cfg.patch = 8;
    cfg.embed_dim = 8;
    cfg.swin_layers = 2;
    cfg.swin_heads = 2;
    cfg.window = 2;
    cfg.node_dim = 6;
    cfg.rgcn_hidden = 5;
    cfg.gt_hidden = 4;
    cfg.gt_heads = 2;
    cfg.past_window = 1;
    cfg.future_window = 1;
    cfg.delta_min = 2;
    cfg.delta_max = 3;
    cfg.seed = 23;
    return cfg;
}

FeatureClip random_features(std::size_t T, Rng& rng) {
    FeatureClip f(T, 16, 16, 9, 30.0);
    for (auto& v : f.data) v = rng.uniform(-1, 1);
    return f;
}

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({1e-3, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("forward emits one prediction per frame") {
    const ModelConfig cfg = tiny_config();
    Rng rng(1);
    for (std::size_t T : {4u, 8u, 13u}) {
        const RelGraph g = build_graph(static_cast<int>(T), cfg.past_window, cfg.future_window,
                                       cfg.delta_min, cfg.delta_max);
        const FeatureClip in = random_features(T, rng);
        const ModelParams params = init_params(cfg);
        const BvpSeries pred = model_forward(in, g, cfg, params, nullptr);
        CHECK(pred.size() == T);
        CHECK(pred.fps == 30.0);
    }
}

TEST_CASE("forward is bit-deterministic") {
    const ModelConfig cfg = tiny_config();
    Rng rng(2);
    const FeatureClip in = random_features(8, rng);
    const RelGraph g = build_graph(8, 1, 1, 2, 3);
    const ModelParams params = init_params(cfg);
    const BvpSeries a = model_forward(in, g, cfg, params, nullptr);
    const BvpSeries b = model_forward(in, g, cfg, params, nullptr);
    CHECK(a.samples == b.samples);
}

TEST_CASE("init_params is seed-reproducible and fan-in scaled") {
    const ModelConfig cfg = tiny_config();
    const ModelParams a = init_params(cfg);
    const ModelParams b = init_params(cfg);
    CHECK(a.patch_kernel.data == b.patch_kernel.data);
    CHECK(a.gt[1].w4.data == b.gt[1].w4.data);
    for (double v : a.blocks[0].ln1_gamma.data) CHECK(v == 1.0);
    for (double v : a.blocks[0].ln1_beta.data) CHECK(v == 0.0);
    for (double v : a.patch_bias.data) CHECK(v == 0.0);
    // fan-in scaling keeps kernel magnitudes near sqrt(1/fan_in)
    double acc = 0.0;
    for (double v : a.patch_kernel.data) acc += v * v;
    const double measured = std::sqrt(acc / static_cast<double>(a.patch_kernel.numel()));
    const double expected = std::sqrt(1.0 / static_cast<double>(a.patch_kernel.shape[1]));
    CHECK(measured == Catch::Approx(expected).epsilon(0.15));
}

TEST_CASE("full-model gradient check over a random parameter subsample") {
    const ModelConfig cfg = tiny_config();
    const std::size_t T = 8;
    const RelGraph g = build_graph(static_cast<int>(T), 1, 1, 2, 3);
    Rng rng(3);
    const FeatureClip in = random_features(T, rng);
    std::vector<double> gt(T);
    for (auto& v : gt) v = rng.uniform(-1, 1);
    ModelParams params = init_params(cfg);

    const auto loss_of = [&] {
        const BvpSeries pred = model_forward(in, g, cfg, params, nullptr);
        return neg_pearson_loss(pred.samples, gt).loss;
    };
    ForwardCache cache;
    const BvpSeries pred = model_forward(in, g, cfg, params, &cache);
    const LossResult loss = neg_pearson_loss(pred.samples, gt);
    ModelParams grads = make_zero_like(cfg);
    model_backward(cache, loss.grad_wrt_pred, g, cfg, params, grads);

    std::vector<TensorF*> p_tensors, g_tensors;
    for_each_param(params, [&](const std::string&, TensorF& t) { p_tensors.push_back(&t); });
    for_each_param(grads, [&](const std::string&, TensorF& t) { g_tensors.push_back(&t); });

    Rng pick(4);
    const double h = 1e-5;
    double worst = 0.0;
    for (int sample = 0; sample < 50; ++sample) {
        const std::size_t ti =
            static_cast<std::size_t>(pick.uniform_int(0, static_cast<std::int64_t>(p_tensors.size()) - 1));
        TensorF& t = *p_tensors[ti];
        const std::size_t ei =
            static_cast<std::size_t>(pick.uniform_int(0, static_cast<std::int64_t>(t.data.size()) - 1));
        const double saved = t.data[ei];
        t.data[ei] = saved + h;
        const double up = loss_of();
        t.data[ei] = saved - h;
        const double down = loss_of();
        t.data[ei] = saved;
        worst = std::max(worst, rel_err((up - down) / (2.0 * h), g_tensors[ti]->data[ei]));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("non-finite activations are rejected in check mode") {
    ModelConfig cfg = tiny_config();
    cfg.check_finite = true;
    Rng rng(5);
    FeatureClip in = random_features(4, rng);
    in.data[10] = std::numeric_limits<double>::infinity();
    const RelGraph g = build_graph(4, 1, 1, 2, 3);
    const ModelParams params = init_params(cfg);
    CHECK_THROWS_AS(model_forward(in, g, cfg, params, nullptr), std::runtime_error);
}

TEST_CASE("model config validation") {
    ModelConfig cfg = tiny_config();
    cfg.embed_dim = 9;  // not divisible by heads
    CHECK_THROWS_AS(cfg.validate_for(16, 16), std::invalid_argument);
    cfg = tiny_config();
    cfg.window = 3;  // does not tile the 2x2 grid
    CHECK_THROWS_AS(cfg.validate_for(16, 16), std::invalid_argument);
    cfg = tiny_config();
    CHECK_THROWS_AS(cfg.validate_for(17, 16), std::invalid_argument);
}
