#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "reperio/augment.hpp"
#include "reperio/dataset.hpp"
#include "reperio/graph.hpp"
#include "reperio/neural.hpp"
#include "reperio/preprocess.hpp"
#include "reperio/rng.hpp"
#include "reperio/tensor.hpp"

namespace reperio {

struct TrainHyper {
    double lr = 1e-3;
    int steps = 200;
    int batch = 4;
    TcmParams tcm;
    double flip_prob = 0.5;
    std::uint64_t seed = 0;
    // History rows carry wall-clock seconds only when enabled; the default
    // keeps every training artifact byte-reproducible under a fixed seed.
    bool wall_times = false;
};

struct AdamState {
    ModelParams m, v;
    long step = 0;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    explicit AdamState(const ModelConfig& cfg) : m(make_zero_like(cfg)), v(make_zero_like(cfg)) {}
};

inline void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state, double lr) {
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    // walk the trees in lock-step via the fixed enumeration order
    std::vector<TensorF*> m_list, v_list;
    std::vector<const TensorF*> g_list;
    for_each_param(grads, [&](const std::string&, const TensorF& t) { g_list.push_back(&t); });
    for_each_param(state.m, [&](const std::string&, TensorF& t) { m_list.push_back(&t); });
    for_each_param(state.v, [&](const std::string&, TensorF& t) { v_list.push_back(&t); });
    std::size_t k = 0;
    for_each_param(params, [&](const std::string&, TensorF& p) {
        TensorF& m = *m_list[k];
        TensorF& v = *v_list[k];
        const TensorF& g = *g_list[k];
        for (std::size_t i = 0; i < p.data.size(); ++i) {
            m.data[i] = state.beta1 * m.data[i] + (1.0 - state.beta1) * g.data[i];
            v.data[i] = state.beta2 * v.data[i] + (1.0 - state.beta2) * g.data[i] * g.data[i];
            const double mhat = m.data[i] / bc1;
            const double vhat = v.data[i] / bc2;
            p.data[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
        }
        ++k;
    });
}

inline std::string param_file_name(const std::string& name) {
    std::string out = name;
    for (auto& ch : out) {
        if (ch == '.') ch = '_';
    }
    return out + ".rptf";
}

// Checkpoint layout: one .rptf per tensor plus manifest.csv (name,shape,file).
inline void save_checkpoint(const ModelParams& params, const std::filesystem::path& dir,
                            Dtype dtype = Dtype::f32) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("checkpoint: cannot create " + dir.string());
    std::ofstream manifest(dir / "manifest.csv");
    if (!manifest) throw std::runtime_error("checkpoint: cannot write manifest");
    manifest << "name,shape,file\n";
    for_each_param(params, [&](const std::string& name, const TensorF& t) {
        const std::string file = param_file_name(name);
        write_tensor(dir / file, t, dtype);
        manifest << name << ",";
        for (std::size_t d = 0; d < t.shape.size(); ++d)
            manifest << (d ? "x" : "") << t.shape[d];
        manifest << "," << file << "\n";
    });
}

inline ModelParams load_checkpoint(const std::filesystem::path& dir, const ModelConfig& cfg) {
    ModelParams params = make_param_skeleton(cfg);
    std::ifstream manifest(dir / "manifest.csv");
    if (!manifest) throw std::runtime_error("checkpoint: missing manifest in " + dir.string());
    for_each_param(params, [&](const std::string& name, TensorF& t) {
        TensorF loaded = read_tensor(dir / param_file_name(name));
        if (loaded.shape != t.shape)
            throw std::runtime_error("checkpoint: shape mismatch for " + name);
        t = std::move(loaded);
    });
    return params;
}

struct LoadedDataset {
    std::vector<ManifestRow> manifest;
    std::vector<Clip> clips;
    std::vector<BvpSeries> labels;
};

inline LoadedDataset load_dataset(const std::filesystem::path& dir) {
    LoadedDataset ds;
    ds.manifest = read_manifest(dir);
    if (ds.manifest.empty()) throw std::runtime_error("dataset: empty manifest in " + dir.string());
    for (const auto& row : ds.manifest) {
        try {
            ds.clips.push_back(load_clip(dir, row.id, row.fps));
            ds.labels.push_back(load_bvp(dir, row.id, row.fps));
        } catch (const std::exception& e) {
            throw std::runtime_error("dataset: clip " + row.id + ": " + e.what());
        }
    }
    return ds;
}

struct TrainResult {
    ModelParams params;
    std::vector<double> loss_history;
};

// Builds the relation graph for a clip, scaling the periodicity window when
// the footage is not 30 fps.
inline RelGraph graph_for_clip(const ModelConfig& cfg, int T, double fps) {
    int dmin = cfg.delta_min, dmax = cfg.delta_max;
    if (fps != 30.0) {
        dmin = scale_delta_for_fps(cfg.delta_min, fps);
        dmax = scale_delta_for_fps(cfg.delta_max, fps);
        std::fprintf(stderr, "graph: scaled delta window to [%d, %d] for fps %.3f\n", dmin, dmax,
                     fps);
    }
    return build_graph(T, cfg.past_window, cfg.future_window, dmin, dmax);
}

// Seeded mini-batch loop: sample batch -> TCM -> assemble features -> forward
// -> negative-Pearson loss -> Adam. Emits history.csv and tcm_audit.csv.
inline TrainResult train(const std::filesystem::path& dataset_dir, const ModelConfig& cfg,
                         const TrainHyper& hyper, const std::filesystem::path& out_dir) {
    if (hyper.steps < 0 || hyper.batch < 1) throw std::invalid_argument("train: bad hyper");
    LoadedDataset ds = load_dataset(dataset_dir);
    const std::size_t n_clips = ds.clips.size();
    const auto& first = ds.clips.front();
    for (const auto& clip : ds.clips) {
        if (!clip.same_geometry(first) || clip.fps != first.fps)
            throw std::runtime_error("train: clips must share geometry and fps");
    }
    cfg.validate_for(first.H, first.W);
    const RelGraph graph = graph_for_clip(cfg, static_cast<int>(first.T), first.fps);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("train: cannot create " + out_dir.string());
    std::ofstream history(out_dir / "history.csv");
    std::ofstream audit(out_dir / "tcm_audit.csv");
    if (!history || !audit) throw std::runtime_error("train: cannot open output files");
    history << "step,loss,lr,seconds\n";
    audit << "step,i,j,s,L\n";

    ModelParams params = init_params(cfg);
    AdamState adam(cfg);
    TrainResult result;
    const auto t0 = std::chrono::steady_clock::now();

    const std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(hyper.batch), n_clips);
    for (int step = 0; step < hyper.steps; ++step) {
        // distinct clip indices, drawn without replacement
        Rng batch_rng = Rng::derive(hyper.seed, {0x626174ULL, static_cast<std::uint64_t>(step)});
        std::vector<std::size_t> pool(n_clips);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        std::vector<std::size_t> picks;
        for (std::size_t k = 0; k < batch; ++k) {
            const std::size_t at = static_cast<std::size_t>(
                batch_rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1));
            picks.push_back(pool[at]);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
        }

        std::vector<Clip> batch_clips;
        std::vector<BvpSeries> batch_labels;
        for (std::size_t i : picks) {
            batch_clips.push_back(ds.clips[i]);
            batch_labels.push_back(ds.labels[i]);
        }
        TcmBatchResult mixed = tcm_batch(batch_clips, batch_labels, hyper.tcm, hyper.seed,
                                         static_cast<std::uint64_t>(step));
        for (const auto& entry : mixed.audit) {
            audit << step << "," << picks[entry.clip_index] << "," << picks[entry.partner_index]
                  << "," << entry.s << "," << entry.L << "\n";
        }

        ModelParams grads = make_zero_like(cfg);
        double batch_loss = 0.0;
        for (std::size_t k = 0; k < batch; ++k) {
            Rng flip_rng = Rng::derive(hyper.seed,
                                       {0x666c6970ULL, static_cast<std::uint64_t>(step), k});
            const FeatureClip input =
                assemble_input(mixed.clips[k], flip_rng, hyper.flip_prob, cfg.blur_sigma);
            ForwardCache cache;
            const BvpSeries pred = model_forward(input, graph, cfg, params, &cache);
            LossResult loss = neg_pearson_loss(pred.samples, mixed.labels[k].samples);
            batch_loss += loss.loss;
            const double inv_batch = 1.0 / static_cast<double>(batch);
            for (auto& g : loss.grad_wrt_pred) g *= inv_batch;
            model_backward(cache, loss.grad_wrt_pred, graph, cfg, params, grads);
        }
        batch_loss /= static_cast<double>(batch);
        adam_step(params, grads, adam, hyper.lr);
        result.loss_history.push_back(batch_loss);

        double seconds = 0.0;
        if (hyper.wall_times) {
            seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        char line[128];
        std::snprintf(line, sizeof(line), "%d,%.12g,%.12g,%.3f\n", step, batch_loss, hyper.lr,
                      seconds);
        history << line;
    }

    save_checkpoint(params, out_dir / "checkpoint");
    result.params = std::move(params);
    return result;
}

// Forward pass over every clip of a dataset; no augmentation, no flipping.
// Writes one f64 [T] tensor per clip under out_dir.
inline void predict(const std::filesystem::path& dataset_dir, const ModelConfig& cfg,
                    const ModelParams& params, const std::filesystem::path& out_dir) {
    LoadedDataset ds = load_dataset(dataset_dir);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("predict: cannot create " + out_dir.string());
    Rng unused(0);
    for (std::size_t i = 0; i < ds.clips.size(); ++i) {
        const auto& clip = ds.clips[i];
        cfg.validate_for(clip.H, clip.W);
        const RelGraph graph = graph_for_clip(cfg, static_cast<int>(clip.T), clip.fps);
        const FeatureClip input = assemble_input(clip, unused, 0.0, cfg.blur_sigma);
        const BvpSeries pred = model_forward(input, graph, cfg, params, nullptr);
        TensorF t({pred.samples.size()}, pred.samples);
        write_tensor(out_dir / (ds.manifest[i].id + ".rptf"), t, Dtype::f64);
    }
}

inline BvpSeries load_prediction(const std::filesystem::path& preds_dir, const std::string& id,
                                 double fps) {
    TensorF t = read_tensor(preds_dir / (id + ".rptf"));
    if (t.shape.size() != 1)
        throw std::runtime_error("prediction tensor must be 1-D: " + id);
    return BvpSeries(std::move(t.data), fps);
}

}  // namespace reperio
