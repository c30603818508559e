#include "gap/pagerank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gap/assign.hpp"

namespace gap {

namespace {

bool approx_equal(double a, double b) noexcept {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Strictly greater beyond tie tolerance.
bool clearly_greater(double a, double b) noexcept { return a > b && !approx_equal(a, b); }

}  // namespace

RankGraph build_graph(const Instance& instance) {
    const std::size_t m = instance.num_sites();
    if (m == 0) throw std::invalid_argument("build_graph: instance has no sites");

    RankGraph g;
    g.demand.assign(m, 0.0);
    for (std::size_t p = 0; p < instance.num_generators(); ++p) {
        const auto reach = instance.reachable(p);
        if (!reach.empty()) g.demand[static_cast<std::size_t>(reach.front())] += instance.generators()[p].waste;
    }
    g.weights.assign(m * m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            if (a == b) continue;
            const double d = std::max(instance.site_distance(a, b), kMinSiteDistance);
            g.weights[a * m + b] = (g.demand[a] + g.demand[b]) / d;
        }
    }
    return g;
}

Ranking pagerank(const RankGraph& graph, const PageRankOptions& options) {
    const std::size_t n = graph.size();
    if (n == 0) throw std::invalid_argument("pagerank: empty graph");
    if (graph.weights.size() != n * n) throw std::invalid_argument("pagerank: weight matrix is not n x n");

    std::vector<double> out_weight(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) out_weight[j] += graph.weight(j, k);
    }

    const double d = options.damping;
    Ranking r;
    std::vector<double> pr(n, d);
    std::vector<double> next(n);
    while (r.iterations < options.max_iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double w = graph.weight(j, i);
                if (w > 0.0 && out_weight[j] > 0.0) sum += w * pr[j] / out_weight[j];
            }
            next[i] = (1.0 - d) + d * sum;
        }
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - pr[i]);
        pr.swap(next);
        ++r.iterations;
        r.residuals.push_back(change);
        if (change < options.tol) {
            r.converged = true;
            break;
        }
    }

    r.scores = std::move(pr);
    r.order.resize(n);
    std::iota(r.order.begin(), r.order.end(), 0);
    std::stable_sort(r.order.begin(), r.order.end(), [&](int a, int b) {
        return r.scores[static_cast<std::size_t>(a)] > r.scores[static_cast<std::size_t>(b)];
    });
    return r;
}

Ranking rank_sites(const Instance& instance, const PageRankOptions& options) {
    return pagerank(build_graph(instance), options);
}

// ---------------------------------------------------------------------------

namespace {

struct Candidate {
    int config = -1;
    Objectives objectives;
};

// Visits sites in rank order; `pick` receives the site, the partial plan
// (with the site still at 0) and returns the configuration to install.
template <class Pick>
Plan sweep(const Instance& instance, const Ranking& ranking, Pick&& pick) {
    if (ranking.order.size() != instance.num_sites()) {
        throw std::invalid_argument("ranking does not match the instance's sites");
    }
    Plan plan = empty_plan(instance);
    for (int site : ranking.order) {
        plan.genes[static_cast<std::size_t>(site)] = pick(static_cast<std::size_t>(site), plan);
    }
    return plan;
}

// Best admitted configuration at `site`; earlier catalog entries win ties.
template <class Filter, class Better>
int choose(const Instance& instance, std::size_t site, Plan& plan, Filter&& admit, Better&& better) {
    Candidate best;
    for (int c : instance.feasible_configs(site)) {
        if (!admit(instance.config(c))) continue;
        plan.genes[site] = c;
        Candidate cand{c, evaluate_greedy(instance, plan)};
        if (best.config < 0 || better(cand, best)) best = cand;
    }
    plan.genes[site] = 0;
    return best.config < 0 ? 0 : best.config;
}

}  // namespace

Plan pr_vol(const Instance& instance, const Ranking& ranking) {
    bool done = false;
    return sweep(instance, ranking, [&](std::size_t site, Plan& plan) {
        if (done) return 0;
        const auto admit = [](const Configuration&) { return true; };
        const auto better = [](const Candidate& a, const Candidate& b) {
            const auto &x = a.objectives, &y = b.objectives;
            if (!approx_equal(x.volume, y.volume)) return x.volume > y.volume;
            return clearly_greater(y.cost, x.cost);
        };
        const int pick = choose(instance, site, plan, admit, better);
        plan.genes[site] = pick;
        const double collected = evaluate_greedy(instance, plan).volume;
        done = approx_equal(collected, instance.total_waste());
        return pick;
    });
}

Plan pr_dist(const Instance& instance, const Ranking& ranking) {
    return sweep(instance, ranking, [&](std::size_t site, Plan& plan) {
        // Once everything is collected more bins cannot shorten any walk.
        if (approx_equal(evaluate_greedy(instance, plan).volume, instance.total_waste())) return 0;
        const auto admit = [](const Configuration& c) { return c.capacity > 0.0; };
        const auto better = [](const Candidate& a, const Candidate& b) {
            const auto &x = a.objectives, &y = b.objectives;
            if (!approx_equal(x.distance, y.distance)) return x.distance < y.distance;
            return clearly_greater(x.volume, y.volume);
        };
        return choose(instance, site, plan, admit, better);
    });
}

Plan pr_cost(const Instance& instance, const Ranking& ranking) {
    const std::size_t n = instance.num_generators();
    std::vector<char> visited(instance.num_sites(), 0);

    return sweep(instance, ranking, [&](std::size_t site, Plan& plan) {
        const auto assignment = decode_greedy(instance, plan);
        double demand = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            const auto reach = instance.reachable(p);
            const auto first = std::find_if(reach.begin(), reach.end(),
                                            [&](int i) { return !visited[static_cast<std::size_t>(i)]; });
            if (first == reach.end() || static_cast<std::size_t>(*first) != site) continue;
            double taken = 0.0;
            for (const auto& s : assignment.rows[p]) taken += s.fraction;
            demand += std::max(0.0, 1.0 - taken) * instance.generators()[p].waste;
        }
        visited[site] = 1;

        double largest = 0.0;
        for (int c : instance.feasible_configs(site)) largest = std::max(largest, instance.config(c).capacity);
        const double target = std::min(demand, largest);

        const auto admit = [&](const Configuration& c) {
            return c.capacity >= target || approx_equal(c.capacity, target);
        };
        const auto better = [](const Candidate& a, const Candidate& b) {
            const auto &x = a.objectives, &y = b.objectives;
            if (!approx_equal(x.cost, y.cost)) return x.cost < y.cost;
            return clearly_greater(x.volume, y.volume);
        };
        return choose(instance, site, plan, admit, better);
    });
}

std::vector<AggregationWeights> weight_grid() {
    std::vector<AggregationWeights> out;
    for (int a = 0; a <= 10; ++a) {
        for (int b = 0; a + b <= 10; ++b) {
            out.push_back({a / 10.0, b / 10.0, (10 - a - b) / 10.0});
        }
    }
    return out;
}

Plan pr_weighted(const Instance& instance, const Ranking& ranking, const AggregationWeights& w) {
    const double max_cost = static_cast<double>(instance.num_sites()) * instance.max_config_cost();
    const double max_dist = static_cast<double>(instance.num_generators()) * instance.max_walk();
    const double max_vol = instance.total_waste();
    const auto scaled = [](double v, double scale) { return scale > 0.0 ? v / scale : 0.0; };
    const auto score = [&](const Objectives& o) {
        return w.cost * scaled(o.cost, max_cost) + w.distance * scaled(o.distance, max_dist) -
               w.volume * scaled(o.volume, max_vol);
    };

    return sweep(instance, ranking, [&](std::size_t site, Plan& plan) {
        const auto admit = [](const Configuration&) { return true; };
        const auto better = [&](const Candidate& a, const Candidate& b) {
            const double sa = score(a.objectives);
            const double sb = score(b.objectives);
            if (!approx_equal(sa, sb)) return sa < sb;
            return clearly_greater(b.objectives.cost, a.objectives.cost);
        };
        return choose(instance, site, plan, admit, better);
    });
}

Front pr_mo(const Instance& instance, const Ranking& ranking) {
    std::vector<FrontPoint> points;
    for (const auto& w : weight_grid()) {
        Plan plan = pr_weighted(instance, ranking, w);
        const auto o = evaluate_greedy(instance, plan);
        points.push_back({o, std::move(plan)});
    }
    return nondominated(std::move(points));
}

}  // namespace gap
