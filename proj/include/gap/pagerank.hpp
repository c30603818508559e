#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "gap/metrics.hpp"
#include "gap/model.hpp"

namespace gap {

/// Site distances below this are clamped when forming edge weights, so
/// co-located sites still get a finite weight.
inline constexpr double kMinSiteDistance = 0.1;

/// Weighted graph over candidate sites. weights is row-major: entry
/// (a, b) is the weight of the edge a -> b, zero meaning no edge.
struct RankGraph {
    std::vector<double> demand;
    std::vector<double> weights;

    std::size_t size() const noexcept { return demand.size(); }
    double weight(std::size_t from, std::size_t to) const noexcept { return weights[from * demand.size() + to]; }
};

/// Site demand b_i is the waste of the generators whose nearest site within
/// D is i (ties to the lower site id). All site pairs are joined in both
/// directions with w = (b_j + b_k) / max(d_jk, kMinSiteDistance).
RankGraph build_graph(const Instance& instance);

struct PageRankOptions {
    double damping = 0.85;
    double tol = 1e-9;
    int max_iter = 1000;
};

struct Ranking {
    std::vector<double> scores;
    std::vector<int> order;  // site ids by descending score, ties by id
    int iterations = 0;
    bool converged = false;
    std::vector<double> residuals;  // L1 change per iteration
};

/// Jacobi iteration of PR(i) = (1-d) + d * sum_j w_ji PR(j) / out(j),
/// started from PR = d. Stops once the L1 change drops below tol; if
/// max_iter is hit first, returns the last iterate with converged = false.
Ranking pagerank(const RankGraph& graph, const PageRankOptions& options = {});

Ranking rank_sites(const Instance& instance, const PageRankOptions& options = {});

// Constructive heuristics. Each visits the sites in ranking order and fixes
// one configuration per site, scoring candidates by the greedy decoding of
// the partial plan (unvisited sites hold configuration 0).

/// Max collected volume, then lowest cost, then catalog order. Stops
/// installing once all waste is collected.
Plan pr_vol(const Instance& instance, const Ranking& ranking);

/// Among configurations with positive capacity: min fraction-weighted
/// distance, then max volume, then catalog order. Sites visited after all
/// waste is collected keep configuration 0.
Plan pr_dist(const Instance& instance, const Ranking& ranking);

/// Among configurations covering the site's residual demand (clamped to the
/// largest capacity available there): lowest cost, then max volume, then
/// catalog order. Residual demand is the still-uncollected waste of
/// generators whose nearest unvisited reachable site is this one.
Plan pr_cost(const Instance& instance, const Ranking& ranking);

struct AggregationWeights {
    double cost = 0.0;      // alpha
    double distance = 0.0;  // beta
    double volume = 0.0;    // gamma
};

/// The 66 triples on the 0.1 grid summing to one.
std::vector<AggregationWeights> weight_grid();

/// Min alpha*cost/maxcost + beta*dist/maxdist - gamma*vol/maxvol, then lowest
/// cost, then catalog order. maxcost = M * costliest configuration, maxdist =
/// N * D, maxvol = total waste.
Plan pr_weighted(const Instance& instance, const Ranking& ranking, const AggregationWeights& w);

/// Non-dominated set of pr_weighted over the whole weight grid.
Front pr_mo(const Instance& instance, const Ranking& ranking);

}  // namespace gap
