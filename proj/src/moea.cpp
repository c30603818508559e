#include "gap/moea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gap {

void EAParams::validate() const {
    auto bad = [](const std::string& what) { throw std::invalid_argument("EAParams: " + what); };
    if (pop_size < 2) bad("pop_size must be >= 2");
    if (!(p_crossover >= 0.0 && p_crossover <= 1.0)) bad("p_crossover must be in [0,1]");
    if (!(p_mutation >= 0.0 && p_mutation <= 1.0)) bad("p_mutation must be in [0,1]");
    if (elite_size < 1) bad("elite_size must be >= 1");
    if (tournament_size < 1) bad("tournament_size must be >= 1");
}

void evaluate_individual(const Instance& instance, Individual& ind, DecoderKind decoder) {
    ind.objectives = evaluate_with(instance, ind.plan, decoder);
    ind.key = minimized(ind.objectives);
}

std::vector<Individual> init_population(const Instance& instance, const EAParams& params, Rng& rng) {
    if (instance.num_configs() == 0) throw std::invalid_argument("init_population: empty catalog");
    std::vector<Individual> pop(params.pop_size);
    for (auto& ind : pop) {
        ind.plan.genes.resize(instance.num_sites());
        for (std::size_t i = 0; i < instance.num_sites(); ++i) {
            const auto options = instance.feasible_configs(i);
            ind.plan.genes[i] = options[rng.below(options.size())];
        }
        evaluate_individual(instance, ind, params.decoder);
    }
    return pop;
}

std::pair<Plan, Plan> crossover_2px_at(const Plan& a, const Plan& b, std::size_t lo, std::size_t hi) {
    if (a.genes.size() != b.genes.size()) throw std::invalid_argument("crossover_2px: parent lengths differ");
    if (lo > hi) std::swap(lo, hi);
    if (hi > a.genes.size()) throw std::out_of_range("crossover_2px: cut point beyond plan length");
    Plan c = a;
    Plan d = b;
    std::swap_ranges(c.genes.begin() + static_cast<std::ptrdiff_t>(lo),
                     c.genes.begin() + static_cast<std::ptrdiff_t>(hi),
                     d.genes.begin() + static_cast<std::ptrdiff_t>(lo));
    return {std::move(c), std::move(d)};
}

std::pair<Plan, Plan> crossover_2px(const Plan& a, const Plan& b, Rng& rng) {
    if (a.genes.size() != b.genes.size()) throw std::invalid_argument("crossover_2px: parent lengths differ");
    const auto m = static_cast<std::int64_t>(a.genes.size());
    const auto lo = static_cast<std::size_t>(rng.between(0, m));
    const auto hi = static_cast<std::size_t>(rng.between(0, m));
    return crossover_2px_at(a, b, lo, hi);
}

Plan mutate_reset(const Instance& instance, Plan plan, double p_mutation, Rng& rng) {
    if (plan.genes.size() != instance.num_sites()) throw std::invalid_argument("mutate_reset: plan length mismatch");
    for (std::size_t i = 0; i < plan.genes.size(); ++i) {
        if (rng.bernoulli(p_mutation)) {
            const auto options = instance.feasible_configs(i);
            plan.genes[i] = options[rng.below(options.size())];
        }
    }
    return plan;
}

std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const ObjVec> points) {
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> dominator_count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(points[i], points[j])) {
                dominated_by_me[i].push_back(j);
                ++dominator_count[j];
            } else if (dominates(points[j], points[i])) {
                dominated_by_me[j].push_back(i);
                ++dominator_count[i];
            }
        }
    }

    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        if (dominator_count[i] == 0) current.push_back(i);
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            for (std::size_t j : dominated_by_me[i]) {
                if (--dominator_count[j] == 0) next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(std::span<const ObjVec> front) {
    const std::size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), inf);
        return dist;
    }
    std::vector<std::size_t> idx(n);
    for (std::size_t k = 0; k < 3; ++k) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return front[a][k] < front[b][k]; });
        dist[idx.front()] = inf;
        dist[idx.back()] = inf;
        const double range = front[idx.back()][k] - front[idx.front()][k];
        if (!(range > 0.0)) continue;
        for (std::size_t r = 1; r + 1 < n; ++r) {
            dist[idx[r]] += (front[idx[r + 1]][k] - front[idx[r - 1]][k]) / range;
        }
    }
    return dist;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<ObjVec> keys_of(std::span<const Individual> pop) {
    std::vector<ObjVec> keys(pop.size());
    std::transform(pop.begin(), pop.end(), keys.begin(), [](const Individual& i) { return i.key; });
    return keys;
}

// Min-max scaling over the given points; constant objectives collapse to 0.
std::vector<ObjVec> normalize_by_range(std::span<const ObjVec> points) {
    ObjVec lo, hi;
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (const auto& p : points) {
        for (std::size_t k = 0; k < 3; ++k) {
            lo[k] = std::min(lo[k], p[k]);
            hi[k] = std::max(hi[k], p[k]);
        }
    }
    std::vector<ObjVec> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            const double range = hi[k] - lo[k];
            out[i][k] = range > 0.0 ? (points[i][k] - lo[k]) / range : 0.0;
        }
    }
    return out;
}

double euclid(const ObjVec& a, const ObjVec& b) noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < 3; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

Front to_front(std::span<const Individual> members) {
    std::vector<FrontPoint> pts;
    pts.reserve(members.size());
    for (const auto& m : members) pts.push_back({m.objectives, m.plan});
    return nondominated(std::move(pts));
}

// Offspring by tournament selection, 2PX and reset mutation. `prefer(a, b)`
// is true when candidate a beats b; the first drawn wins ties.
template <class Prefer>
std::vector<Individual> make_offspring(const Instance& instance, const EAParams& params,
                                       std::span<const Individual> pool, Prefer&& prefer, Rng& select_rng,
                                       Rng& cross_rng, Rng& mut_rng) {
    auto tournament = [&]() -> const Individual& {
        std::size_t best = select_rng.below(pool.size());
        for (std::size_t t = 1; t < params.tournament_size; ++t) {
            const std::size_t c = select_rng.below(pool.size());
            if (prefer(pool[c], pool[best])) best = c;
        }
        return pool[best];
    };

    std::vector<Individual> kids;
    kids.reserve(params.pop_size + 1);
    while (kids.size() < params.pop_size) {
        const Individual& a = tournament();
        const Individual& b = tournament();
        std::pair<Plan, Plan> children;
        if (cross_rng.bernoulli(params.p_crossover)) {
            children = crossover_2px(a.plan, b.plan, cross_rng);
        } else {
            children = {a.plan, b.plan};
        }
        for (Plan* child : {&children.first, &children.second}) {
            if (kids.size() == params.pop_size) break;
            Individual ind;
            ind.plan = mutate_reset(instance, std::move(*child), params.p_mutation, mut_rng);
            evaluate_individual(instance, ind, params.decoder);
            kids.push_back(std::move(ind));
        }
    }
    return kids;
}

// Fills `size` survivors front by front; the front that does not fit is
// cut by descending crowding distance, stable in merge order.
std::vector<Individual> nsga2_survivors(std::vector<Individual> merged, std::size_t size) {
    const auto keys = keys_of(merged);
    const auto fronts = non_dominated_sort(keys);

    std::vector<Individual> next;
    next.reserve(size);
    for (std::size_t r = 0; r < fronts.size() && next.size() < size; ++r) {
        const auto& front = fronts[r];
        std::vector<ObjVec> fk(front.size());
        for (std::size_t k = 0; k < front.size(); ++k) fk[k] = keys[front[k]];
        const auto crowd = crowding_distance(fk);

        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        if (next.size() + front.size() > size) {
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
            order.resize(size - next.size());
        }
        for (std::size_t k : order) {
            Individual& ind = merged[front[k]];
            ind.rank = static_cast<int>(r);
            ind.crowding = crowd[k];
            next.push_back(std::move(ind));
        }
    }
    return next;
}

}  // namespace

Front nsga2(const Instance& instance, const EAParams& params, const GenerationObserver& observer) {
    params.validate();
    Rng init_rng(params.seed, Stream::init);
    Rng select_rng(params.seed, Stream::selection);
    Rng cross_rng(params.seed, Stream::crossover);
    Rng mut_rng(params.seed, Stream::mutation);

    auto pop = nsga2_survivors(init_population(instance, params, init_rng), params.pop_size);
    if (observer) observer(0, pop);

    const auto prefer = [](const Individual& a, const Individual& b) {
        if (a.rank != b.rank) return a.rank < b.rank;
        return a.crowding > b.crowding;
    };
    for (std::size_t gen = 1; gen <= params.generations; ++gen) {
        auto kids = make_offspring(instance, params, pop, prefer, select_rng, cross_rng, mut_rng);
        std::move(kids.begin(), kids.end(), std::back_inserter(pop));
        pop = nsga2_survivors(std::move(pop), params.pop_size);
        if (observer) observer(gen, pop);
    }

    std::vector<Individual> first;
    for (auto& ind : pop) {
        if (ind.rank == 0) first.push_back(std::move(ind));
    }
    return to_front(first);
}

// ---------------------------------------------------------------------------

Spea2Fitness spea2_fitness(std::span<const ObjVec> points) {
    const std::size_t n = points.size();
    Spea2Fitness f;
    f.strength.assign(n, 0);
    f.raw.assign(n, 0.0);
    f.density.assign(n, 0.0);
    f.fitness.assign(n, 0.0);
    if (n == 0) return f;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && dominates(points[i], points[j])) ++f.strength[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && dominates(points[j], points[i])) f.raw[i] += f.strength[j];
        }
    }

    const auto norm = normalize_by_range(points);
    const auto k = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    std::vector<double> d;
    for (std::size_t i = 0; i < n; ++i) {
        d.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) d.push_back(euclid(norm[i], norm[j]));
        }
        double sigma = 0.0;
        if (!d.empty()) {
            const std::size_t pos = std::min(k, d.size()) - 1;
            std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(pos), d.end());
            sigma = d[pos];
        }
        f.density[i] = 1.0 / (sigma + 2.0);
        f.fitness[i] = f.raw[i] + f.density[i];
    }
    return f;
}

std::vector<std::size_t> truncate_archive(std::span<const ObjVec> members, std::size_t limit) {
    const std::size_t n = members.size();
    std::vector<std::size_t> alive(n);
    std::iota(alive.begin(), alive.end(), std::size_t{0});
    if (n <= limit) return alive;

    const auto norm = normalize_by_range(members);
    // neighbours[i]: (distance, j) to every other live member, ascending.
    std::vector<std::vector<std::pair<double, std::size_t>>> neighbours(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) neighbours[i].emplace_back(euclid(norm[i], norm[j]), j);
        }
        std::sort(neighbours[i].begin(), neighbours[i].end());
    }

    auto lexicographically_closer = [&](std::size_t a, std::size_t b) {
        const auto& x = neighbours[a];
        const auto& y = neighbours[b];
        for (std::size_t k = 0; k < x.size() && k < y.size(); ++k) {
            if (x[k].first != y[k].first) return x[k].first < y[k].first;
        }
        return false;
    };

    while (alive.size() > limit) {
        std::size_t victim_pos = 0;
        for (std::size_t p = 1; p < alive.size(); ++p) {
            if (lexicographically_closer(alive[p], alive[victim_pos])) victim_pos = p;
        }
        const std::size_t victim = alive[victim_pos];
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(victim_pos));
        for (std::size_t i : alive) {
            auto& list = neighbours[i];
            list.erase(std::find_if(list.begin(), list.end(), [victim](const auto& e) { return e.second == victim; }));
        }
    }
    return alive;
}

Front spea2(const Instance& instance, const EAParams& params, const GenerationObserver& observer) {
    params.validate();
    Rng init_rng(params.seed, Stream::init);
    Rng select_rng(params.seed, Stream::selection);
    Rng cross_rng(params.seed, Stream::crossover);
    Rng mut_rng(params.seed, Stream::mutation);

    auto pop = init_population(instance, params, init_rng);
    std::vector<Individual> archive;

    const auto prefer = [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; };
    for (std::size_t gen = 0;; ++gen) {
        std::vector<Individual> merged = std::move(pop);
        merged.insert(merged.end(), archive.begin(), archive.end());

        const auto keys = keys_of(merged);
        const auto fit = spea2_fitness(keys);
        for (std::size_t i = 0; i < merged.size(); ++i) merged[i].fitness = fit.fitness[i];

        std::vector<std::size_t> nd;
        for (std::size_t i = 0; i < merged.size(); ++i) {
            if (fit.raw[i] == 0.0) nd.push_back(i);
        }
        if (nd.size() > params.elite_size) {
            std::vector<ObjVec> nd_keys(nd.size());
            for (std::size_t k = 0; k < nd.size(); ++k) nd_keys[k] = keys[nd[k]];
            const auto kept = truncate_archive(nd_keys, params.elite_size);
            std::vector<std::size_t> survivors(kept.size());
            for (std::size_t k = 0; k < kept.size(); ++k) survivors[k] = nd[kept[k]];
            nd = std::move(survivors);
        }
        archive.clear();
        for (std::size_t i : nd) archive.push_back(merged[i]);
        if (observer) observer(gen, archive);
        if (gen == params.generations) break;

        pop = make_offspring(instance, params, merged, prefer, select_rng, cross_rng, mut_rng);
    }
    return to_front(archive);
}

}  // namespace gap
