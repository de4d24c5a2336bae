#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reperio/signal.hpp"

namespace reperio {

struct HrPair {
    std::string clip_id;
    double gt_bpm = 0.0;
    double pred_bpm = 0.0;
};

struct MetricsAggregate {
    double mae_bpm = 0.0;
    double rmse_bpm = 0.0;
    double mape_pct = 0.0;
    std::optional<double> pearson_r;  // empty when either side is constant
};

inline MetricsAggregate compute_metrics(std::span<const HrPair> pairs) {
    if (pairs.empty()) throw std::invalid_argument("compute_metrics: no pairs");
    MetricsAggregate agg;
    double sq = 0.0;
    double mape = 0.0;
    std::size_t mape_n = 0;
    for (const auto& p : pairs) {
        const double d = p.pred_bpm - p.gt_bpm;
        agg.mae_bpm += std::abs(d);
        sq += d * d;
        if (p.gt_bpm != 0.0) {
            mape += std::abs(d / p.gt_bpm);
            ++mape_n;
        }
    }
    const double n = static_cast<double>(pairs.size());
    agg.mae_bpm /= n;
    agg.rmse_bpm = std::sqrt(sq / n);
    agg.mape_pct = mape_n ? 100.0 * mape / static_cast<double>(mape_n) : 0.0;
    if (pairs.size() >= 2) {
        std::vector<double> gt, pred;
        for (const auto& p : pairs) {
            gt.push_back(p.gt_bpm);
            pred.push_back(p.pred_bpm);
        }
        try {
            agg.pearson_r = pearson(gt, pred);
        } catch (const std::domain_error&) {
            agg.pearson_r.reset();  // constant series: r flagged as undefined
        }
    }
    return agg;
}

struct BlandAltman {
    std::vector<double> means;
    std::vector<double> diffs;  // pred - gt
    double bias = 0.0;
    double loa_low = 0.0;
    double loa_high = 0.0;
};

inline BlandAltman bland_altman_rows(std::span<const HrPair> pairs) {
    if (pairs.size() < 2) throw std::invalid_argument("bland_altman: need at least 2 pairs");
    BlandAltman ba;
    for (const auto& p : pairs) {
        ba.means.push_back((p.gt_bpm + p.pred_bpm) / 2.0);
        ba.diffs.push_back(p.pred_bpm - p.gt_bpm);
    }
    ba.bias = mean_of(ba.diffs);
    const double sd = stddev_of(ba.diffs);
    ba.loa_low = ba.bias - 1.96 * sd;
    ba.loa_high = ba.bias + 1.96 * sd;
    return ba;
}

}  // namespace reperio
