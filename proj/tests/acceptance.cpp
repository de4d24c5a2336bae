// Acceptance suite: one criterion per function, each printing a PASS/FAIL
// line with its runtime. Run with no argument for all criteria or with an
// index (1..9) for a single one.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "reperio/augment.hpp"
#include "reperio/baselines.hpp"
#include "reperio/dataset.hpp"
#include "reperio/graph.hpp"
#include "reperio/metrics.hpp"
#include "reperio/neural.hpp"
#include "reperio/signal.hpp"
#include "reperio/synth.hpp"
#include "reperio/train.hpp"

using namespace reperio;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

fs::path work_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "reperio_acceptance" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Denominator floor keeps central-difference cancellation noise from
// dominating entries whose true gradient is near zero.
double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({1e-3, std::abs(a), std::abs(b)});
}

// ---------------------------------------------------------------- criterion 1
// TCM spectral identity: the closed form equals the FFT of the time-domain
// mixture at every DFT bin, 200 random configurations, T <= 512, 1e-9.
Outcome criterion_spectral_identity() {
    Outcome out;
    Rng rng(2024);
    double worst = 0.0;
    for (int it = 0; it < 200; ++it) {
        const int T = 16 + static_cast<int>(rng.uniform_int(0, 496));
        const double fps = rng.uniform(20.0, 60.0);
        const SineSpec s1{rng.uniform(0.1, 2.0), rng.uniform(0.3, fps / 2.5),
                          rng.uniform(0.0, kTwoPi)};
        const SineSpec s2{rng.uniform(0.1, 2.0), rng.uniform(0.3, fps / 2.5),
                          rng.uniform(0.0, kTwoPi)};
        const int L = 1 + static_cast<int>(rng.uniform_int(0, T - 2));
        const int s = 1 + static_cast<int>(rng.uniform_int(0, T - L));
        const TemporalMask mask(T, s, L);
        const auto x = mixed_time_signal(s1, s2, mask, T, fps);
        const auto dft = fft_real(x);
        for (int k = 0; k < T; ++k) {
            const double w = kTwoPi * static_cast<double>(k) / static_cast<double>(T);
            const auto analytic = analytic_mixed_spectrum(s1, s2, mask, T, fps, w);
            const auto reference = dft[static_cast<std::size_t>(k)] * std::polar(1.0, -w);
            worst = std::max(worst, std::abs(analytic - reference));
        }
    }
    out.require(worst < 1e-9, "worst deviation " + std::to_string(worst));
    out.detail = "worst |analytic - fft| = " + std::to_string(worst);
    return out;
}

// ---------------------------------------------------------------- criterion 2
// Peak attenuation: with bin-aligned f1 and well-separated f2, the magnitude
// at the f1 bin shrinks within 5% of (T-L)/T for L in {45, 60, 90}.
Outcome criterion_peak_attenuation() {
    Outcome out;
    const int T = 180;
    const double fps = 30.0;
    double worst = 0.0;
    for (int k1 : {6, 12}) {
        for (int offset : {12, 20, 30}) {  // all >= the 5-bin minimum separation
            for (int L : {45, 60, 90}) {
                const int s = 1 + (T - L) / 2;
                const SineSpec s1{1.0, k1 * fps / T, 0.7};
                const SineSpec s2{1.0, (k1 + offset) * fps / T, 1.3};
                const TemporalMask mask(T, s, L);
                const auto mixed = mixed_time_signal(s1, s2, mask, T, fps);
                std::vector<double> clean(static_cast<std::size_t>(T));
                for (int t = 1; t <= T; ++t)
                    clean[static_cast<std::size_t>(t - 1)] =
                        std::sin(kTwoPi * s1.freq_hz / fps * t + s1.phase);
                const auto dm = fft_real(mixed);
                const auto dc = fft_real(clean);
                const double attenuation = std::abs(dm[static_cast<std::size_t>(k1)]) /
                                           std::abs(dc[static_cast<std::size_t>(k1)]);
                const double expected = static_cast<double>(T - L) / T;
                const double rel = std::abs(attenuation - expected) / expected;
                worst = std::max(worst, rel);
                out.require(rel <= 0.05, "relative deviation " + std::to_string(rel) + " at L=" +
                                             std::to_string(L));
            }
        }
    }
    if (out.pass) out.detail = "worst relative deviation " + std::to_string(worst);
    return out;
}

// ---------------------------------------------------------------- criterion 3
// Graph construction equals the brute-force oracle on 1000 random configs,
// plus the lag-to-bpm window mapping at 30 fps.
Outcome criterion_graph_oracle() {
    Outcome out;
    Rng rng(77);
    for (int it = 0; it < 1000; ++it) {
        const int T = 1 + static_cast<int>(rng.uniform_int(0, 255));
        const int P = static_cast<int>(rng.uniform_int(0, 16));
        const int F = static_cast<int>(rng.uniform_int(0, 16));
        const int dmin = 1 + static_cast<int>(rng.uniform_int(0, 63));
        const int dmax = dmin + static_cast<int>(rng.uniform_int(0, 63));
        const RelGraph fast = build_graph(T, P, F, dmin, dmax);
        const RelGraph slow = brute_force_graph(T, P, F, dmin, dmax);
        if (!graphs_equal(fast, slow)) {
            out.require(false, "mismatch at T=" + std::to_string(T));
            return out;
        }
    }
    // delta in [15, 25] frames at 30 fps <-> [72, 120] bpm
    out.require(60.0 * 30.0 / 15.0 == 120.0, "delta_min mapping");
    out.require(60.0 * 30.0 / 25.0 == 72.0, "delta_max mapping");
    const RelGraph reference = build_graph(180, 1, 1, 15, 25);
    out.require(reference.neighbors(90, Relation::InterPast).size() == 11,
                "reference config degree");
    out.detail = "1000 configs equal; [15,25] frames <-> [72,120] bpm";
    return out;
}

// ---------------------------------------------------------------- criterion 4
// Gradient suite: every parameterized layer and the full tiny model pass
// central finite differences (rel err < 1e-4) over 5 seeds.
Outcome criterion_gradients() {
    Outcome out;
    double worst = 0.0;

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
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
        cfg.seed = seed;

        const std::size_t T = 8;
        const RelGraph graph = build_graph(static_cast<int>(T), cfg.past_window,
                                           cfg.future_window, cfg.delta_min, cfg.delta_max);
        Rng rng(seed * 31 + 7);
        FeatureClip input(T, 16, 16, 9, 30.0);
        for (auto& v : input.data) v = rng.uniform(-1, 1);
        std::vector<double> gt(T);
        for (auto& v : gt) v = rng.uniform(-1, 1);

        ModelParams params = init_params(cfg);
        const auto loss_of = [&] {
            const BvpSeries pred = model_forward(input, graph, cfg, params, nullptr);
            return neg_pearson_loss(pred.samples, gt).loss;
        };
        ForwardCache cache;
        const BvpSeries pred = model_forward(input, graph, cfg, params, &cache);
        const LossResult loss = neg_pearson_loss(pred.samples, gt);
        ModelParams grads = make_zero_like(cfg);
        model_backward(cache, loss.grad_wrt_pred, graph, cfg, params, grads);

        std::vector<TensorF*> p_tensors, g_tensors;
        std::vector<std::string> names;
        for_each_param(params, [&](const std::string& n, TensorF& t) {
            p_tensors.push_back(&t);
            names.push_back(n);
        });
        for_each_param(grads, [&](const std::string&, TensorF& t) { g_tensors.push_back(&t); });

        // every parameterized layer: a few entries of every tensor, plus a
        // random subsample across the whole model
        Rng pick(seed * 101 + 3);
        const double h = 1e-5;
        const auto check_entry = [&](std::size_t ti, std::size_t ei) {
            TensorF& t = *p_tensors[ti];
            const double saved = t.data[ei];
            t.data[ei] = saved + h;
            const double up = loss_of();
            t.data[ei] = saved - h;
            const double down = loss_of();
            t.data[ei] = saved;
            const double numeric = (up - down) / (2.0 * h);
            const double rel = rel_err(numeric, g_tensors[ti]->data[ei]);
            worst = std::max(worst, rel);
            out.require(rel < 1e-4, names[ti] + " rel err " + std::to_string(rel));
        };
        for (std::size_t ti = 0; ti < p_tensors.size(); ++ti) {
            for (int rep = 0; rep < 2; ++rep) {
                const std::size_t ei = static_cast<std::size_t>(
                    pick.uniform_int(0, static_cast<std::int64_t>(p_tensors[ti]->data.size()) - 1));
                check_entry(ti, ei);
            }
        }
        for (int rep = 0; rep < 10; ++rep) {
            const std::size_t ti = static_cast<std::size_t>(
                pick.uniform_int(0, static_cast<std::int64_t>(p_tensors.size()) - 1));
            const std::size_t ei = static_cast<std::size_t>(
                pick.uniform_int(0, static_cast<std::int64_t>(p_tensors[ti]->data.size()) - 1));
            check_entry(ti, ei);
        }
        if (!out.pass) return out;
    }
    out.detail = "worst relative error " + std::to_string(worst) + " over 5 seeds";
    return out;
}

// ---------------------------------------------------------------- criterion 5
// Loss properties: range, exact endpoints, affine invariance.
Outcome criterion_loss_properties() {
    Outcome out;
    Rng rng(11);
    for (int it = 0; it < 100; ++it) {
        const std::size_t T = 8 + static_cast<std::size_t>(rng.uniform_int(0, 120));
        std::vector<double> gt(T), pred(T);
        for (auto& v : gt) v = rng.uniform(-2, 2);
        for (auto& v : pred) v = rng.uniform(-2, 2);
        const double loss = neg_pearson_loss(pred, gt).loss;
        out.require(loss >= 0.0 && loss <= 2.0, "loss outside [0,2]");

        out.require(std::abs(neg_pearson_loss(gt, gt).loss) < 1e-12, "loss(gt,gt) != 0");
        std::vector<double> neg(T);
        for (std::size_t i = 0; i < T; ++i) neg[i] = -gt[i];
        out.require(std::abs(neg_pearson_loss(neg, gt).loss - 2.0) < 1e-12, "loss(-gt,gt) != 2");

        const double a = rng.uniform(0.1, 5.0);
        const double b = rng.uniform(-3.0, 3.0);
        std::vector<double> affine(T);
        for (std::size_t i = 0; i < T; ++i) affine[i] = a * pred[i] + b;
        out.require(std::abs(neg_pearson_loss(affine, gt).loss - loss) < 1e-10,
                    "affine invariance violated");
    }
    if (out.pass) out.detail = "range, endpoints and affine invariance hold on 100 signals";
    return out;
}

// ---------------------------------------------------------------- criterion 6
// End-to-end toy training: 64 train / 16 held-out synthetic clips, tiny
// config, 200 Adam steps at lr 1e-3. Held-out loss < 0.3 and HR MAE < 3 bpm.
Outcome criterion_toy_training() {
    Outcome out;
    SynthRanges ranges;
    ranges.base.T = 60;
    ranges.base.H = 32;
    ranges.base.W = 32;
    ranges.base.fps = 30.0;
    ranges.hr_min_bpm = 72.0;
    ranges.hr_max_bpm = 120.0;
    const fs::path train_dir = work_dir("toy_train");
    const fs::path heldout_dir = work_dir("toy_heldout");
    gen_dataset(64, ranges, 1001, train_dir);
    gen_dataset(16, ranges, 2002, heldout_dir);

    ModelConfig cfg;
    cfg.patch = 8;
    cfg.embed_dim = 16;
    cfg.swin_layers = 2;
    cfg.swin_heads = 2;
    cfg.window = 4;  // single window over the 4x4 token grid
    cfg.node_dim = 16;
    cfg.rgcn_hidden = 16;
    cfg.gt_hidden = 16;
    cfg.gt_heads = 2;
    cfg.past_window = 1;
    cfg.future_window = 1;
    cfg.delta_min = 15;
    cfg.delta_max = 25;
    cfg.seed = 7;

    TrainHyper hyper;
    hyper.lr = 1e-3;
    hyper.steps = 200;
    hyper.batch = 4;
    hyper.tcm.p = 0.4;
    hyper.tcm.r_min = 0.25;
    hyper.tcm.r_max = 0.5;
    hyper.seed = 7;

    const fs::path out_dir = work_dir("toy_out");
    const TrainResult result = train(train_dir, cfg, hyper, out_dir);
    out.require(result.loss_history.back() < result.loss_history.front(),
                "training loss did not decrease");

    // held-out evaluation without augmentation or flipping
    const LoadedDataset heldout = load_dataset(heldout_dir);
    const RelGraph graph = build_graph(60, cfg.past_window, cfg.future_window, cfg.delta_min,
                                       cfg.delta_max);
    Rng unused(0);
    double loss_sum = 0.0;
    std::vector<HrPair> pairs;
    for (std::size_t i = 0; i < heldout.clips.size(); ++i) {
        const FeatureClip input = assemble_input(heldout.clips[i], unused, 0.0, cfg.blur_sigma);
        const BvpSeries pred = model_forward(input, graph, cfg, result.params, nullptr);
        loss_sum += neg_pearson_loss(pred.samples, heldout.labels[i].samples).loss;
        HrPair pair;
        pair.clip_id = heldout.manifest[i].id;
        pair.gt_bpm = estimate_hr(heldout.labels[i]);
        pair.pred_bpm = estimate_hr(pred);
        pairs.push_back(pair);
    }
    const double heldout_loss = loss_sum / static_cast<double>(heldout.clips.size());
    const MetricsAggregate agg = compute_metrics(pairs);
    out.require(heldout_loss < 0.3, "held-out loss " + std::to_string(heldout_loss));
    out.require(agg.mae_bpm < 3.0, "held-out HR MAE " + std::to_string(agg.mae_bpm));
    out.detail = "held-out loss " + std::to_string(heldout_loss) + ", HR MAE " +
                 std::to_string(agg.mae_bpm) + " bpm";
    return out;
}

// ---------------------------------------------------------------- criterion 7
// Classical baselines recover the embedded rate: within 1 bpm on noise-free
// clips at five rates; POS within 3 bpm at noise_std = 0.01.
Outcome criterion_baselines() {
    Outcome out;
    for (double hr : {60.0, 72.0, 90.0, 120.0, 150.0}) {
        SynthConfig cfg;
        cfg.T = 300;
        cfg.hr_bpm = hr;
        cfg.noise_std = 0.0;
        cfg.seed = static_cast<std::uint64_t>(hr);
        const auto [clip, bvp] = gen_clip(cfg);
        const RoiTrace trace = extract_trace(clip, RoiKind::SkinMask);
        const double pos_hr = estimate_hr(pos_signal(trace));
        const double chrom_hr = estimate_hr(chrom_signal(trace));
        out.require(std::abs(pos_hr - hr) <= 1.0,
                    "POS " + std::to_string(pos_hr) + " at " + std::to_string(hr));
        out.require(std::abs(chrom_hr - hr) <= 1.0,
                    "CHROM " + std::to_string(chrom_hr) + " at " + std::to_string(hr));

        SynthConfig noisy = cfg;
        noisy.noise_std = 0.01;
        noisy.seed += 9000;
        const auto [noisy_clip, noisy_bvp] = gen_clip(noisy);
        const double noisy_pos = estimate_hr(pos_signal(extract_trace(noisy_clip)));
        out.require(std::abs(noisy_pos - hr) <= 3.0,
                    "noisy POS " + std::to_string(noisy_pos) + " at " + std::to_string(hr));
    }
    if (out.pass) out.detail = "POS/CHROM within 1 bpm clean, POS within 3 bpm at noise 0.01";
    return out;
}

// ---------------------------------------------------------------- criterion 8
// HRV statistics match an independently coded brute-force script on 50
// random peak trains; constant intervals give SDNN exactly zero.
Outcome criterion_hrv_oracle() {
    Outcome out;
    Rng rng(31);
    double worst = 0.0;
    for (int it = 0; it < 50; ++it) {
        const int beats = 4 + static_cast<int>(rng.uniform_int(0, 60));
        std::vector<int> peaks{0};
        for (int k = 1; k < beats; ++k)
            peaks.push_back(peaks.back() + 18 + static_cast<int>(rng.uniform_int(0, 24)));
        const HrvMetrics got = hrv_metrics(peaks, 30.0);

        // independent evaluation in long double
        std::vector<long double> ibi;
        for (std::size_t k = 0; k + 1 < peaks.size(); ++k)
            ibi.push_back((peaks[k + 1] - peaks[k]) * 1000.0L / 30.0L);
        long double mean = 0;
        for (const auto v : ibi) mean += v;
        mean /= static_cast<long double>(ibi.size());
        long double var = 0;
        for (const auto v : ibi) var += (v - mean) * (v - mean);
        var /= static_cast<long double>(ibi.size());
        std::vector<long double> diffs;
        for (std::size_t k = 0; k + 1 < ibi.size(); ++k) diffs.push_back(ibi[k + 1] - ibi[k]);
        long double dmean = 0;
        for (const auto v : diffs) dmean += v;
        dmean /= static_cast<long double>(diffs.size());
        long double dvar = 0;
        for (const auto v : diffs) dvar += (v - dmean) * (v - dmean);
        dvar /= static_cast<long double>(diffs.size());
        const double sdnn = static_cast<double>(sqrtl(var));
        const double sd1 = static_cast<double>(sqrtl(dvar / 2.0L));
        const double sd2 = static_cast<double>(sqrtl(2.0L * var - dvar / 2.0L));

        worst = std::max({worst, std::abs(got.mean_ibi_ms - static_cast<double>(mean)),
                          std::abs(got.sdnn_ms - sdnn), std::abs(got.sd1_ms - sd1),
                          std::abs(got.sd2_ms - sd2)});
        if (got.sd1_sd2)
            worst = std::max(worst, std::abs(*got.sd1_sd2 - sd1 / sd2));
    }
    out.require(worst < 1e-9, "worst deviation " + std::to_string(worst));

    std::vector<int> constant;
    for (int k = 0; k < 12; ++k) constant.push_back(25 * k);
    const HrvMetrics flat = hrv_metrics(constant, 30.0);
    out.require(flat.sdnn_ms == 0.0, "constant-IBI SDNN not exactly zero");
    out.require(!flat.sd1_sd2.has_value(), "constant-IBI SD ratio should be degenerate");
    if (out.pass) out.detail = "worst |got - oracle| = " + std::to_string(worst);
    return out;
}

// ---------------------------------------------------------------- criterion 9
// Determinism: the full CLI pipeline (synth -> train -> predict -> eval)
// run twice with one seed produces byte-identical trees.
Outcome criterion_determinism() {
    Outcome out;
    const std::string cli = REPERIO_CLI_PATH;

    const auto run_pipeline = [&](const fs::path& root) -> bool {
        const fs::path data = root / "data";
        const fs::path run = root / "run";
        const fs::path preds = root / "preds";
        const fs::path config = root / "run.ini";
        {
            std::ofstream os(config);
            os << "[model]\npatch = 8\nembed_dim = 8\nswin_layers = 1\nswin_heads = 2\n"
                  "window = 2\nnode_dim = 8\nrgcn_hidden = 8\ngt_hidden = 8\ngt_heads = 2\n"
                  "past_window = 1\nfuture_window = 1\ndelta_min = 15\ndelta_max = 25\n"
                  "[train]\nlr = 0.001\nsteps = 30\nbatch = 4\nseed = 11\n"
                  "[tcm]\np = 0.4\nr_min = 0.25\nr_max = 0.5\n";
        }
        const std::string quiet = " > /dev/null 2>&1";
        std::string cmd = cli + " synth --n 10 --frames 60 --height 16 --width 16 --seed 11 --out " +
                          data.string() + quiet;
        if (std::system(cmd.c_str()) != 0) return false;
        cmd = cli + " train --config " + config.string() + " --dataset " + data.string() +
              " --out " + run.string() + quiet;
        if (std::system(cmd.c_str()) != 0) return false;
        cmd = cli + " predict --config " + config.string() + " --dataset " + data.string() +
              " --checkpoint " + (run / "checkpoint").string() + " --out " + preds.string() + quiet;
        if (std::system(cmd.c_str()) != 0) return false;
        cmd = cli + " eval --dataset " + data.string() + " --preds " + preds.string() + " --out " +
              (root / "metrics.csv").string() + " --bland-altman " + (root / "ba.csv").string() +
              quiet;
        return std::system(cmd.c_str()) == 0;
    };

    const fs::path root_a = work_dir("pipeline_a");
    const fs::path root_b = work_dir("pipeline_b");
    out.require(run_pipeline(root_a), "pipeline run A failed");
    if (!out.pass) return out;
    out.require(run_pipeline(root_b), "pipeline run B failed");
    if (!out.pass) return out;

    // compare the two trees byte for byte
    std::vector<fs::path> rel_files;
    for (const auto& entry : fs::recursive_directory_iterator(root_a)) {
        if (entry.is_regular_file()) rel_files.push_back(fs::relative(entry.path(), root_a));
    }
    out.require(!rel_files.empty(), "pipeline produced no files");
    std::size_t compared = 0;
    for (const auto& rel : rel_files) {
        std::ifstream a(root_a / rel, std::ios::binary), b(root_b / rel, std::ios::binary);
        if (!b) {
            out.require(false, "missing in run B: " + rel.string());
            return out;
        }
        const std::vector<char> bytes_a{std::istreambuf_iterator<char>(a),
                                        std::istreambuf_iterator<char>()};
        const std::vector<char> bytes_b{std::istreambuf_iterator<char>(b),
                                        std::istreambuf_iterator<char>()};
        if (bytes_a != bytes_b) {
            out.require(false, "differs: " + rel.string());
            return out;
        }
        ++compared;
    }
    out.detail = std::to_string(compared) + " files byte-identical across runs";
    return out;
}

struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {"tcm spectral identity (1e-9, 200 configs)", 10.0, criterion_spectral_identity},
        {"peak attenuation within 5% of (T-L)/T", 10.0, criterion_peak_attenuation},
        {"graph oracle equivalence + bpm mapping", 30.0, criterion_graph_oracle},
        {"finite-difference gradient suite (5 seeds)", 300.0, criterion_gradients},
        {"negative-pearson loss properties", 10.0, criterion_loss_properties},
        {"end-to-end toy training", 600.0, criterion_toy_training},
        {"POS/CHROM baseline oracle", 60.0, criterion_baselines},
        {"HRV statistics oracle", 10.0, criterion_hrv_oracle},
        {"pipeline determinism", 600.0, criterion_determinism},
    };

    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);
    if (only < 0 || only > static_cast<int>(criteria.size())) {
        std::fprintf(stderr, "usage: acceptance [1..%zu]\n", criteria.size());
        return 2;
    }

    bool all_pass = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[i].run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > criteria[i].budget_seconds) {
            outcome.pass = false;
            outcome.detail += " [over time budget]";
        }
        std::printf("[%s] criterion %zu: %s (%.2f s) %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].name, seconds, outcome.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && outcome.pass;
    }
    return all_pass ? 0 : 1;
}
