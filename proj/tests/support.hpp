#pragma once

// Instance builders and independent reference implementations shared by the
// unit, integration and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "gap/assign.hpp"
#include "gap/metrics.hpp"
#include "gap/model.hpp"
#include "gap/pagerank.hpp"
#include "gap/rng.hpp"

namespace gaptest {

inline std::string data_path(const std::string& rel) { return std::string(GAP_DATA_DIR) + "/" + rel; }

// Standard bin types and catalog, no generators or sites yet.
inline gap::InstanceData standard_data() {
    gap::InstanceData d;
    d.bin_types = gap::standard_bin_types();
    d.catalog = gap::standard_catalog();
    return d;
}

inline void add_generator(gap::InstanceData& d, double x, double y, double waste) {
    d.generators.push_back({static_cast<int>(d.generators.size()), {x, y}, waste});
}

inline void add_site(gap::InstanceData& d, double x, double y, double space = 5.0) {
    d.sites.push_back({static_cast<int>(d.sites.size()), {x, y}, space});
}

// Catalog of {empty} plus the given bin-count rows over the standard bin types.
inline std::vector<gap::Configuration> catalog_of(const std::vector<std::vector<int>>& rows) {
    const auto types = gap::standard_bin_types();
    std::vector<gap::Configuration> out{gap::make_configuration(0, {0, 0, 0}, types)};
    for (const auto& r : rows) out.push_back(gap::make_configuration(static_cast<int>(out.size()), r, types));
    return out;
}

// Generators with the given waste and an explicit N x M distance table.
// Sites sit on a line 1 km apart so site distances stay well defined.
inline gap::Instance explicit_instance(const std::vector<double>& waste, const std::vector<std::vector<double>>& dist,
                                       std::vector<gap::Configuration> catalog = gap::standard_catalog(),
                                       double space = 5.0) {
    gap::InstanceData d;
    d.bin_types = gap::standard_bin_types();
    d.catalog = std::move(catalog);
    for (double b : waste) add_generator(d, 0.0, 0.0, b);
    const std::size_t m = dist.empty() ? 0 : dist.front().size();
    for (std::size_t i = 0; i < m; ++i) add_site(d, 1000.0 * static_cast<double>(i), 0.0, space);
    std::vector<double> flat;
    for (const auto& row : dist) flat.insert(flat.end(), row.begin(), row.end());
    d.distance = std::move(flat);
    return gap::Instance(std::move(d));
}

// Random small instance on a square of the given side. Integer coordinates
// make distance ties (and so tie-break paths) reasonably common.
inline gap::Instance random_instance(gap::Rng& rng, std::size_t n, std::size_t m, double side = 500.0,
                                     double max_waste = 3.0) {
    auto d = standard_data();
    for (std::size_t p = 0; p < n; ++p) {
        add_generator(d, static_cast<double>(rng.below(static_cast<std::uint64_t>(side))),
                      static_cast<double>(rng.below(static_cast<std::uint64_t>(side))), rng.uniform() * max_waste);
    }
    for (std::size_t i = 0; i < m; ++i) {
        add_site(d, static_cast<double>(rng.below(static_cast<std::uint64_t>(side))),
                 static_cast<double>(rng.below(static_cast<std::uint64_t>(side))));
    }
    return gap::Instance(std::move(d));
}

inline gap::Plan random_plan(const gap::Instance& inst, gap::Rng& rng) {
    gap::Plan plan = gap::empty_plan(inst);
    for (std::size_t i = 0; i < inst.num_sites(); ++i) {
        const auto opts = inst.feasible_configs(i);
        plan.genes[i] = opts[rng.below(opts.size())];
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Oracles

inline bool weakly_dominates(const gap::ObjVec& a, const gap::ObjVec& b) {
    return a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2];
}

inline bool strictly_dominates(const gap::ObjVec& a, const gap::ObjVec& b) {
    return weakly_dominates(a, b) && a != b;
}

// Hypervolume by inclusion-exclusion over all subsets (exponential; <= ~12 points).
inline double hv_inclusion_exclusion(const std::vector<gap::ObjVec>& pts, const gap::ObjVec& ref) {
    std::vector<gap::ObjVec> in;
    for (const auto& p : pts) {
        if (p[0] < ref[0] && p[1] < ref[1] && p[2] < ref[2]) in.push_back(p);
    }
    const std::size_t n = in.size();
    double total = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        gap::ObjVec corner{-1e300, -1e300, -1e300};
        int bits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) {
                ++bits;
                for (int k = 0; k < 3; ++k) corner[k] = std::max(corner[k], in[i][k]);
            }
        }
        const double vol = (ref[0] - corner[0]) * (ref[1] - corner[1]) * (ref[2] - corner[2]);
        total += (bits % 2 ? 1.0 : -1.0) * vol;
    }
    return total;
}

// Rank partition by repeatedly peeling off the members no remaining member dominates.
inline std::vector<std::vector<std::size_t>> peel_fronts(const std::vector<gap::ObjVec>& pts) {
    std::vector<std::size_t> left(pts.size());
    std::iota(left.begin(), left.end(), std::size_t{0});
    std::vector<std::vector<std::size_t>> fronts;
    while (!left.empty()) {
        std::vector<std::size_t> front, rest;
        for (std::size_t i : left) {
            bool dominated = false;
            for (std::size_t j : left) {
                if (strictly_dominates(pts[j], pts[i])) {
                    dominated = true;
                    break;
                }
            }
            (dominated ? rest : front).push_back(i);
        }
        fronts.push_back(std::move(front));
        left = std::move(rest);
    }
    return fronts;
}

// Solves (I - d A) x = (1 - d) 1 with A_ij = w_ji / out_j by Gaussian
// elimination with partial pivoting.
inline std::vector<double> pagerank_linear(const gap::RankGraph& g, double damping) {
    const std::size_t n = g.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) out[j] += g.weight(j, k);
    }
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (out[j] > 0.0) a[i][j] -= damping * g.weight(j, i) / out[j];
        }
        a[i][n] = 1.0 - damping;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        std::swap(a[c], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    return x;
}

inline gap::RankGraph random_graph(gap::Rng& rng, std::size_t n, double edge_prob) {
    gap::RankGraph g;
    g.demand.assign(n, 0.0);
    g.weights.assign(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (!rng.bernoulli(edge_prob)) continue;
            const double w = 0.1 + 10.0 * rng.uniform();
            g.weights[a * n + b] = w;
            g.weights[b * n + a] = w;
        }
    }
    return g;
}

// Straight re-statement of the distance sweep, built on the materialized
// greedy assignment rather than the library's incremental evaluator.
inline gap::Plan pr_dist_reference(const gap::Instance& inst, const gap::Ranking& ranking) {
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); };
    gap::Plan plan = gap::empty_plan(inst);
    for (int site : ranking.order) {
        const auto i = static_cast<std::size_t>(site);
        const auto now = gap::evaluate(inst, plan, gap::decode_greedy(inst, plan));
        if (close(now.volume, inst.total_waste())) continue;
        int best = -1;
        gap::Objectives best_o;
        for (int c : inst.feasible_configs(i)) {
            if (!(inst.config(c).capacity > 0.0)) continue;
            plan.genes[i] = c;
            const auto o = gap::evaluate(inst, plan, gap::decode_greedy(inst, plan));
            bool take = best < 0;
            if (!take && !close(o.distance, best_o.distance)) take = o.distance < best_o.distance;
            else if (!take) take = o.volume > best_o.volume && !close(o.volume, best_o.volume);
            if (take) {
                best = c;
                best_o = o;
            }
        }
        plan.genes[i] = best < 0 ? 0 : best;
    }
    return plan;
}

}  // namespace gaptest
