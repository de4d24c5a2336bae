#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace reperio {

// Typed edge families of the temporal graph. "Past"/"Next" relations hold the
// sources that feed a target node, read from the target's perspective.
enum class Relation : int { IntraPast = 0, IntraFuture = 1, InterPast = 2, InterNext = 3 };

inline constexpr std::array<Relation, 4> kAllRelations = {
    Relation::IntraPast, Relation::IntraFuture, Relation::InterPast, Relation::InterNext};

inline const char* relation_name(Relation r) {
    switch (r) {
        case Relation::IntraPast: return "IntraPast";
        case Relation::IntraFuture: return "IntraFuture";
        case Relation::InterPast: return "InterPast";
        case Relation::InterNext: return "InterNext";
    }
    return "?";
}

// T frame nodes with four typed in-neighbor lists per node. Node ids are
// 1-based to match the mask/time conventions; neighbors(i, r) returns the
// ascending source ids feeding node i under relation r.
struct RelGraph {
    int T = 0;
    int P = 0, F = 0;
    int delta_min = 0, delta_max = 0;
    // neighbor_lists[r][i-1]
    std::array<std::vector<std::vector<int>>, 4> neighbor_lists;

    const std::vector<int>& neighbors(int node, Relation r) const {
        return neighbor_lists[static_cast<std::size_t>(r)][static_cast<std::size_t>(node - 1)];
    }
};

inline void validate_graph_params(int T, int P, int F, int delta_min, int delta_max) {
    if (T < 1) throw std::invalid_argument("graph: T must be >= 1");
    if (P < 0 || F < 0) throw std::invalid_argument("graph: windows must be non-negative");
    if (delta_min < 1) throw std::invalid_argument("graph: delta_min must be >= 1");
    if (delta_min > delta_max) throw std::invalid_argument("graph: delta_min > delta_max");
}

// Range arithmetic per relation:
//   IntraPast(i)   = { j : max(1, i-P) <= j < i }
//   IntraFuture(i) = { j : i < j <= min(T, i+F) }
//   InterPast(i)   = { j : max(1, i-delta_max) <= j <= i-delta_min }
//   InterNext(i)   = { j : i+delta_min <= j <= min(T, i+delta_max) }
inline RelGraph build_graph(int T, int P, int F, int delta_min, int delta_max) {
    validate_graph_params(T, P, F, delta_min, delta_max);
    RelGraph g;
    g.T = T;
    g.P = P;
    g.F = F;
    g.delta_min = delta_min;
    g.delta_max = delta_max;
    for (auto& lists : g.neighbor_lists) lists.resize(static_cast<std::size_t>(T));

    auto& intra_past = g.neighbor_lists[static_cast<std::size_t>(Relation::IntraPast)];
    auto& intra_future = g.neighbor_lists[static_cast<std::size_t>(Relation::IntraFuture)];
    auto& inter_past = g.neighbor_lists[static_cast<std::size_t>(Relation::InterPast)];
    auto& inter_next = g.neighbor_lists[static_cast<std::size_t>(Relation::InterNext)];

    for (int i = 1; i <= T; ++i) {
        const std::size_t row = static_cast<std::size_t>(i - 1);
        for (int j = std::max(1, i - P); j < i; ++j) intra_past[row].push_back(j);
        for (int j = i + 1; j <= std::min(T, i + F); ++j) intra_future[row].push_back(j);
        for (int j = std::max(1, i - delta_max); j <= i - delta_min; ++j)
            inter_past[row].push_back(j);
        for (int j = std::max(1, i + delta_min); j <= std::min(T, i + delta_max); ++j)
            inter_next[row].push_back(j);
    }
    return g;
}

// O(T^2) oracle: tests every (i, j) pair against independently written
// membership predicates instead of range endpoints.
inline RelGraph brute_force_graph(int T, int P, int F, int delta_min, int delta_max) {
    validate_graph_params(T, P, F, delta_min, delta_max);
    if (T > 512) throw std::invalid_argument("brute_force_graph: oracle limited to T <= 512");
    RelGraph g;
    g.T = T;
    g.P = P;
    g.F = F;
    g.delta_min = delta_min;
    g.delta_max = delta_max;
    for (auto& lists : g.neighbor_lists) lists.resize(static_cast<std::size_t>(T));

    for (int i = 1; i <= T; ++i) {
        const std::size_t row = static_cast<std::size_t>(i - 1);
        for (int j = 1; j <= T; ++j) {
            const int lag = i - j;
            if (j < i && lag <= P)
                g.neighbor_lists[static_cast<std::size_t>(Relation::IntraPast)][row].push_back(j);
            if (j > i && -lag <= F)
                g.neighbor_lists[static_cast<std::size_t>(Relation::IntraFuture)][row].push_back(j);
            if (lag >= delta_min && lag <= delta_max)
                g.neighbor_lists[static_cast<std::size_t>(Relation::InterPast)][row].push_back(j);
            if (-lag >= delta_min && -lag <= delta_max)
                g.neighbor_lists[static_cast<std::size_t>(Relation::InterNext)][row].push_back(j);
        }
    }
    return g;
}

inline bool graphs_equal(const RelGraph& a, const RelGraph& b) {
    if (a.T != b.T) return false;
    for (std::size_t r = 0; r < 4; ++r) {
        if (a.neighbor_lists[r] != b.neighbor_lists[r]) return false;
    }
    return true;
}

struct DegreeStats {
    int min = 0;
    int max = 0;
    double mean = 0.0;
};

inline std::array<DegreeStats, 4> degree_stats(const RelGraph& g) {
    std::array<DegreeStats, 4> stats{};
    for (std::size_t r = 0; r < 4; ++r) {
        int lo = g.T > 0 ? static_cast<int>(g.neighbor_lists[r][0].size()) : 0;
        int hi = lo;
        long total = 0;
        for (const auto& nbrs : g.neighbor_lists[r]) {
            const int d = static_cast<int>(nbrs.size());
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            total += d;
        }
        stats[r].min = g.T > 0 ? lo : 0;
        stats[r].max = g.T > 0 ? hi : 0;
        stats[r].mean = g.T > 0 ? static_cast<double>(total) / g.T : 0.0;
    }
    return stats;
}

// Inter-period windows are stated for 30 fps footage; other frame rates scale
// the lag bounds proportionally.
inline int scale_delta_for_fps(int delta, double fps) {
    return std::max(1, static_cast<int>(std::lround(delta * fps / 30.0)));
}

}  // namespace reperio
