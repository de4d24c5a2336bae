// reperio: synthetic rPPG pipeline driver.
//
// Subcommands: synth, tcm-spectrum, graph-dump, train, predict, eval,
// baseline, hrv. Every command accepts --seed and --config; explicit flags
// win over config values.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reperio/augment.hpp"
#include "reperio/baselines.hpp"
#include "reperio/config.hpp"
#include "reperio/dataset.hpp"
#include "reperio/graph.hpp"
#include "reperio/metrics.hpp"
#include "reperio/signal.hpp"
#include "reperio/synth.hpp"
#include "reperio/train.hpp"

namespace fs = std::filesystem;
using namespace reperio;

namespace {

fs::path with_suffix(const fs::path& path, const std::string& suffix) {
    fs::path out = path;
    out.replace_filename(path.stem().string() + suffix + path.extension().string());
    return out;
}

void write_metrics_files(const fs::path& out_path, const std::vector<HrPair>& pairs,
                         const std::optional<fs::path>& bland_altman_path) {
    std::ofstream per_clip(out_path);
    if (!per_clip) throw std::runtime_error("cannot write " + out_path.string());
    per_clip << "clip_id,hr_gt_bpm,hr_pred_bpm\n";
    char line[160];
    for (const auto& p : pairs) {
        std::snprintf(line, sizeof(line), "%s,%.12g,%.12g\n", p.clip_id.c_str(), p.gt_bpm,
                      p.pred_bpm);
        per_clip << line;
    }

    const MetricsAggregate agg = compute_metrics(pairs);
    const fs::path summary_path = with_suffix(out_path, "_summary");
    std::ofstream summary(summary_path);
    if (!summary) throw std::runtime_error("cannot write " + summary_path.string());
    summary << "mae_bpm,rmse_bpm,mape_pct,pearson_r\n";
    std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g,", agg.mae_bpm, agg.rmse_bpm,
                  agg.mape_pct);
    summary << line;
    if (agg.pearson_r) {
        std::snprintf(line, sizeof(line), "%.12g\n", *agg.pearson_r);
        summary << line;
    } else {
        summary << "undefined\n";
    }
    std::printf("mae_bpm=%.4f rmse_bpm=%.4f mape_pct=%.4f", agg.mae_bpm, agg.rmse_bpm,
                agg.mape_pct);
    if (agg.pearson_r) std::printf(" pearson_r=%.4f", *agg.pearson_r);
    std::printf("\n");

    if (bland_altman_path) {
        const BlandAltman ba = bland_altman_rows(pairs);
        std::ofstream rows(*bland_altman_path);
        if (!rows) throw std::runtime_error("cannot write " + bland_altman_path->string());
        rows << "mean_bpm,diff_bpm\n";
        for (std::size_t i = 0; i < ba.means.size(); ++i) {
            std::snprintf(line, sizeof(line), "%.12g,%.12g\n", ba.means[i], ba.diffs[i]);
            rows << line;
        }
        const fs::path ba_summary = with_suffix(*bland_altman_path, "_summary");
        std::ofstream bs(ba_summary);
        if (!bs) throw std::runtime_error("cannot write " + ba_summary.string());
        bs << "bias,loa_low,loa_high\n";
        std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g\n", ba.bias, ba.loa_low, ba.loa_high);
        bs << line;
    }
}

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "INI run configuration");
    cmd->add_option("--seed", opts.seed, "seed override");
}

RunConfig load_config_or_default(const CommonOpts& opts) {
    RunConfig cfg;
    if (!opts.config_path.empty()) cfg = parse_run_config(opts.config_path);
    if (opts.seed) {
        cfg.hyper.seed = *opts.seed;
        cfg.model.seed = *opts.seed;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic rPPG pipeline: generation, augmentation analysis, training, evaluation"};
    app.require_subcommand(1);

    // synth ------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    CommonOpts synth_common;
    add_common(synth, synth_common);
    std::size_t synth_n = 4;
    std::string synth_out;
    SynthRanges ranges;
    synth->add_option("--n", synth_n, "number of clips")->required();
    synth->add_option("--out", synth_out, "output dataset directory")->required();
    synth->add_option("--frames", ranges.base.T, "frames per clip");
    synth->add_option("--height", ranges.base.H, "frame height");
    synth->add_option("--width", ranges.base.W, "frame width");
    synth->add_option("--fps", ranges.base.fps, "frames per second");
    synth->add_option("--hr-min", ranges.hr_min_bpm, "heart-rate range low (bpm)");
    synth->add_option("--hr-max", ranges.hr_max_bpm, "heart-rate range high (bpm)");
    synth->add_option("--pulse-amp", ranges.base.pulse_amplitude, "pulse amplitude");
    synth->add_option("--drift-amp", ranges.base.illum_drift_amp, "illumination drift amplitude");
    synth->add_option("--noise-std", ranges.base.noise_std, "gaussian noise sigma");

    // tcm-spectrum -------------------------------------------------------
    auto* tcm = app.add_subcommand("tcm-spectrum",
                                   "emit analytic vs FFT spectra of a masked sinusoid mixture");
    CommonOpts tcm_common;
    add_common(tcm, tcm_common);
    int tcm_T = 180, tcm_s = 60, tcm_L = 60, tcm_bins = 0;
    double tcm_fps = 30.0;
    SineSpec sig1{1.0, 1.2, 0.0}, sig2{1.0, 2.0, 0.0};
    std::string tcm_out;
    tcm->add_option("--frames", tcm_T, "clip length T");
    tcm->add_option("--fps", tcm_fps, "frames per second");
    tcm->add_option("--mask-start", tcm_s, "1-based replaced-segment start");
    tcm->add_option("--mask-len", tcm_L, "replaced-segment length");
    tcm->add_option("--f1", sig1.freq_hz, "kept signal frequency (Hz)");
    tcm->add_option("--a1", sig1.amplitude, "kept signal amplitude");
    tcm->add_option("--phi1", sig1.phase, "kept signal phase (rad)");
    tcm->add_option("--f2", sig2.freq_hz, "inserted signal frequency (Hz)");
    tcm->add_option("--a2", sig2.amplitude, "inserted signal amplitude");
    tcm->add_option("--phi2", sig2.phase, "inserted signal phase (rad)");
    tcm->add_option("--n-bins", tcm_bins, "spectrum grid size (default 8*T)");
    tcm->add_option("--out", tcm_out, "output CSV path")->required();

    // graph-dump ---------------------------------------------------------
    auto* gdump = app.add_subcommand("graph-dump", "emit the temporal relation graph as CSV");
    CommonOpts gdump_common;
    add_common(gdump, gdump_common);
    int gd_T = 180, gd_P = 1, gd_F = 1, gd_dmin = 15, gd_dmax = 25;
    std::string gd_out;
    gdump->add_option("--frames", gd_T, "node count T");
    gdump->add_option("--past", gd_P, "past contextual window");
    gdump->add_option("--future", gd_F, "future contextual window");
    gdump->add_option("--delta-min", gd_dmin, "periodicity window low");
    gdump->add_option("--delta-max", gd_dmax, "periodicity window high");
    gdump->add_option("--out", gd_out, "edges CSV path")->required();

    // train / predict / eval ----------------------------------------------
    auto* train_cmd = app.add_subcommand("train", "train the model on a dataset");
    CommonOpts train_common;
    add_common(train_cmd, train_common);
    std::string train_dataset, train_out;
    train_cmd->add_option("--dataset", train_dataset, "dataset directory");
    train_cmd->add_option("--out", train_out, "output directory (checkpoint + history)");

    auto* predict_cmd = app.add_subcommand("predict", "run the model over a dataset");
    CommonOpts predict_common;
    add_common(predict_cmd, predict_common);
    std::string pred_dataset, pred_checkpoint, pred_out;
    predict_cmd->add_option("--dataset", pred_dataset, "dataset directory");
    predict_cmd->add_option("--checkpoint", pred_checkpoint, "checkpoint directory");
    predict_cmd->add_option("--out", pred_out, "predictions directory");

    auto* eval_cmd = app.add_subcommand("eval", "compare predictions against ground truth");
    CommonOpts eval_common;
    add_common(eval_cmd, eval_common);
    std::string eval_dataset, eval_preds, eval_out, eval_ba;
    double eval_lo = 0.6, eval_hi = 3.3;
    eval_cmd->add_option("--dataset", eval_dataset, "dataset directory");
    eval_cmd->add_option("--preds", eval_preds, "predictions directory");
    eval_cmd->add_option("--out", eval_out, "metrics CSV path");
    eval_cmd->add_option("--bland-altman", eval_ba, "also write Bland-Altman CSV here");
    eval_cmd->add_option("--lo-hz", eval_lo, "HR band low (Hz)");
    eval_cmd->add_option("--hi-hz", eval_hi, "HR band high (Hz)");

    // baseline -------------------------------------------------------------
    auto* baseline_cmd = app.add_subcommand("baseline", "classical POS/CHROM HR extraction");
    CommonOpts baseline_common;
    add_common(baseline_cmd, baseline_common);
    std::string bl_method = "pos", bl_dataset, bl_out, bl_roi = "skin";
    double bl_window_seconds = 1.6;
    baseline_cmd->add_option("--method", bl_method, "pos or chrom")
        ->check(CLI::IsMember({"pos", "chrom"}));
    baseline_cmd->add_option("--dataset", bl_dataset, "dataset directory")->required();
    baseline_cmd->add_option("--out", bl_out, "metrics CSV path")->required();
    baseline_cmd->add_option("--roi", bl_roi, "skin (generator mask) or center crop")
        ->check(CLI::IsMember({"skin", "center"}));
    baseline_cmd->add_option("--window-seconds", bl_window_seconds, "POS window length");

    // hrv --------------------------------------------------------------------
    auto* hrv_cmd = app.add_subcommand("hrv", "interbeat-interval statistics per clip");
    CommonOpts hrv_common;
    add_common(hrv_cmd, hrv_common);
    std::string hrv_dataset, hrv_preds, hrv_out;
    double hrv_lo = 0.6, hrv_hi = 3.3;
    hrv_cmd->add_option("--dataset", hrv_dataset, "dataset directory")->required();
    hrv_cmd->add_option("--preds", hrv_preds, "score predictions instead of ground truth");
    hrv_cmd->add_option("--out", hrv_out, "output CSV path")->required();
    hrv_cmd->add_option("--lo-hz", hrv_lo, "band low (Hz)");
    hrv_cmd->add_option("--hi-hz", hrv_hi, "band high (Hz)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        std::cerr << "run '" << (argc > 0 ? argv[0] : "reperio") << " --help' for usage\n";
        return 2;
    }

    try {
        if (synth->parsed()) {
            RunConfig cfg = load_config_or_default(synth_common);
            const std::uint64_t seed = synth_common.seed.value_or(cfg.hyper.seed);
            const std::string out = !synth_out.empty() ? synth_out : cfg.out_path;
            const auto manifest = gen_dataset(synth_n, ranges, seed, out);
            std::printf("wrote %zu clips to %s\n", manifest.size(), out.c_str());
        } else if (tcm->parsed()) {
            if (tcm_bins == 0) tcm_bins = 8 * tcm_T;
            TemporalMask mask(tcm_T, tcm_s, tcm_L);
            std::ofstream os(tcm_out);
            if (!os) throw std::runtime_error("cannot write " + tcm_out);
            emit_spectrum_csv(os, sig1, sig2, mask, tcm_T, tcm_fps, tcm_bins);
            std::printf("wrote %d bins to %s\n", tcm_bins / 2 + 1, tcm_out.c_str());
        } else if (gdump->parsed()) {
            const RelGraph g = build_graph(gd_T, gd_P, gd_F, gd_dmin, gd_dmax);
            std::ofstream os(gd_out);
            if (!os) throw std::runtime_error("cannot write " + gd_out);
            os << "target,source,relation\n";
            for (int i = 1; i <= g.T; ++i)
                for (Relation r : kAllRelations)
                    for (int j : g.neighbors(i, r))
                        os << i << "," << j << "," << relation_name(r) << "\n";
            const auto stats = degree_stats(g);
            for (std::size_t r = 0; r < 4; ++r) {
                std::printf("%-12s min=%d max=%d mean=%.4f\n",
                            relation_name(static_cast<Relation>(r)), stats[r].min, stats[r].max,
                            stats[r].mean);
            }
        } else if (train_cmd->parsed()) {
            RunConfig cfg = load_config_or_default(train_common);
            const std::string dataset = !train_dataset.empty() ? train_dataset : cfg.dataset_path;
            const std::string out = !train_out.empty() ? train_out : cfg.out_path;
            if (dataset.empty() || out.empty())
                throw std::runtime_error("train: --dataset and --out required (flag or config)");
            const TrainResult result = train(dataset, cfg.model, cfg.hyper, out);
            std::printf("trained %d steps, final loss %.6f, checkpoint in %s/checkpoint\n",
                        cfg.hyper.steps,
                        result.loss_history.empty() ? 0.0 : result.loss_history.back(),
                        out.c_str());
        } else if (predict_cmd->parsed()) {
            RunConfig cfg = load_config_or_default(predict_common);
            const std::string dataset = !pred_dataset.empty() ? pred_dataset : cfg.dataset_path;
            const std::string checkpoint =
                !pred_checkpoint.empty() ? pred_checkpoint : cfg.checkpoint_path;
            const std::string out = !pred_out.empty() ? pred_out : cfg.preds_path;
            if (dataset.empty() || checkpoint.empty() || out.empty())
                throw std::runtime_error(
                    "predict: --dataset, --checkpoint and --out required (flag or config)");
            const ModelParams params = load_checkpoint(checkpoint, cfg.model);
            predict(dataset, cfg.model, params, out);
            std::printf("predictions written to %s\n", out.c_str());
        } else if (eval_cmd->parsed()) {
            RunConfig cfg = load_config_or_default(eval_common);
            const std::string dataset = !eval_dataset.empty() ? eval_dataset : cfg.dataset_path;
            const std::string preds = !eval_preds.empty() ? eval_preds : cfg.preds_path;
            const std::string out = !eval_out.empty() ? eval_out : cfg.out_path;
            if (dataset.empty() || preds.empty() || out.empty())
                throw std::runtime_error(
                    "eval: --dataset, --preds and --out required (flag or config)");
            const auto manifest = read_manifest(dataset);
            std::vector<HrPair> pairs;
            for (const auto& row : manifest) {
                const BvpSeries gt = load_bvp(dataset, row.id, row.fps);
                const BvpSeries pred = load_prediction(preds, row.id, row.fps);
                HrPair pair;
                pair.clip_id = row.id;
                pair.gt_bpm = estimate_hr(gt, eval_lo, eval_hi);
                pair.pred_bpm = estimate_hr(pred, eval_lo, eval_hi);
                if (std::abs(pair.gt_bpm - row.hr_bpm) > 3.0)
                    std::fprintf(stderr,
                                 "warning: clip %s manifest hr %.2f vs estimated %.2f bpm\n",
                                 row.id.c_str(), row.hr_bpm, pair.gt_bpm);
                pairs.push_back(std::move(pair));
            }
            std::optional<fs::path> ba;
            if (!eval_ba.empty()) ba = fs::path(eval_ba);
            write_metrics_files(out, pairs, ba);
        } else if (baseline_cmd->parsed()) {
            const auto manifest = read_manifest(bl_dataset);
            const RoiKind roi = bl_roi == "skin" ? RoiKind::SkinMask : RoiKind::CenterCrop;
            std::vector<HrPair> pairs;
            for (const auto& row : manifest) {
                const Clip clip = load_clip(bl_dataset, row.id, row.fps);
                const BvpSeries gt = load_bvp(bl_dataset, row.id, row.fps);
                const RoiTrace trace = extract_trace(clip, roi);
                const BvpSeries signal = bl_method == "pos"
                                             ? pos_signal(trace, bl_window_seconds)
                                             : chrom_signal(trace);
                HrPair pair;
                pair.clip_id = row.id;
                pair.gt_bpm = estimate_hr(gt);
                pair.pred_bpm = estimate_hr(signal);
                pairs.push_back(std::move(pair));
            }
            write_metrics_files(bl_out, pairs, std::nullopt);
        } else if (hrv_cmd->parsed()) {
            const auto manifest = read_manifest(hrv_dataset);
            std::ofstream os(hrv_out);
            if (!os) throw std::runtime_error("cannot write " + hrv_out);
            os << "clip_id,n_peaks,mean_ibi_ms,sdnn_ms,sd1_ms,sd2_ms,sd1_sd2\n";
            char line[200];
            for (const auto& row : manifest) {
                const BvpSeries raw = hrv_preds.empty()
                                          ? load_bvp(hrv_dataset, row.id, row.fps)
                                          : load_prediction(hrv_preds, row.id, row.fps);
                const BvpSeries filtered = bandpass(raw, hrv_lo, hrv_hi);
                const int min_sep = std::max(1, static_cast<int>(std::lround(row.fps / 2.0)));
                const auto peaks = detect_peaks(filtered, min_sep);
                try {
                    const HrvMetrics m = hrv_metrics(peaks, row.fps);
                    std::snprintf(line, sizeof(line), "%s,%zu,%.12g,%.12g,%.12g,%.12g,",
                                  row.id.c_str(), peaks.size(), m.mean_ibi_ms, m.sdnn_ms, m.sd1_ms,
                                  m.sd2_ms);
                    os << line;
                    if (m.sd1_sd2) {
                        std::snprintf(line, sizeof(line), "%.12g\n", *m.sd1_sd2);
                        os << line;
                    } else {
                        os << "degenerate\n";
                    }
                } catch (const std::exception& e) {
                    std::fprintf(stderr, "warning: clip %s: %s\n", row.id.c_str(), e.what());
                    os << row.id << "," << peaks.size() << ",,,,,\n";
                }
            }
            std::printf("wrote %s\n", hrv_out.c_str());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
