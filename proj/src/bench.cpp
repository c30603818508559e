#include "gap/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "gap/rng.hpp"

namespace gap {

using nlohmann::json;

void ScenarioSpec::validate() const {
    auto bad = [](const std::string& what) { throw std::invalid_argument("ScenarioSpec: " + what); };
    if (n_sites == 0) bad("n_sites must be positive");
    if (width < 0.0 || height < 0.0) bad("area must be non-negative (0 = derive from n_sites)");
    if (!(waste_mean >= 0.0)) bad("waste_mean must be >= 0");
    if (!(waste_jitter >= 0.0 && waste_jitter <= 1.0)) bad("waste_jitter must be in [0,1]");
    if (demand_factor != 0.8 && demand_factor != 1.0 && demand_factor != 1.2) {
        bad("demand_factor must be one of 0.8, 1.0, 1.2");
    }
    if (!(site_space >= 0.0)) bad("site_space must be >= 0");
}

Instance generate_instance(const ScenarioSpec& spec) {
    spec.validate();
    const double side = 100.0 * std::sqrt(static_cast<double>(spec.n_sites));
    const double w = spec.width > 0.0 ? spec.width : side;
    const double h = spec.height > 0.0 ? spec.height : side;

    Rng rng(spec.seed, Stream::instance);
    InstanceData d;
    for (std::size_t p = 0; p < spec.n_generators; ++p) {
        Generator g;
        g.id = static_cast<int>(p);
        g.position = {rng.uniform() * w, rng.uniform() * h};
        d.generators.push_back(g);
    }
    for (std::size_t i = 0; i < spec.n_sites; ++i) {
        Site s;
        s.id = static_cast<int>(i);
        s.position = {rng.uniform() * w, rng.uniform() * h};
        s.space = spec.site_space;
        d.sites.push_back(s);
    }
    for (auto& g : d.generators) {
        const double base = spec.waste_mean * (1.0 + spec.waste_jitter * (2.0 * rng.uniform() - 1.0));
        g.waste = base * spec.demand_factor;
    }
    d.bin_types = standard_bin_types();
    d.catalog = standard_catalog();
    d.max_walk = 300.0;
    return Instance(std::move(d));
}

// ---------------------------------------------------------------------------

namespace {

// Runs fn(k) for k in [0, count) on up to `workers` threads.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < workers; ++t) {
        threads.emplace_back([&] {
            for (std::size_t k = next++; k < count && !failed; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : threads) th.join();
    if (error) std::rethrow_exception(error);
}

// Incremental non-dominated archive; equal vectors keep the first arrival.
class Archive {
public:
    void offer(const ObjVec& key, const Objectives& o, const Plan& plan) {
        for (const auto& k : keys_) {
            if (k == key || dominates(k, key)) return;
        }
        std::size_t w = 0;
        for (std::size_t r = 0; r < keys_.size(); ++r) {
            if (!dominates(key, keys_[r])) {
                if (w != r) {
                    keys_[w] = keys_[r];
                    points_[w] = std::move(points_[r]);
                }
                ++w;
            }
        }
        keys_.resize(w);
        points_.resize(w);
        keys_.push_back(key);
        points_.push_back({o, plan});
    }

    std::vector<FrontPoint> take() { return std::move(points_); }

private:
    std::vector<ObjVec> keys_;
    std::vector<FrontPoint> points_;
};

}  // namespace

Front exhaustive_front(const Instance& instance, DecoderKind decoder) {
    const std::size_t m = instance.num_sites();
    double total = 1.0;
    for (std::size_t i = 0; i < m; ++i) total *= static_cast<double>(instance.feasible_configs(i).size());
    if (total > kExhaustiveLimit) {
        throw std::length_error("exhaustive_front: " + std::to_string(static_cast<long long>(total)) +
                                " genotypes exceed the limit of " +
                                std::to_string(static_cast<long long>(kExhaustiveLimit)));
    }
    if (m == 0) {
        Plan plan;
        return nondominated({{evaluate_with(instance, plan, decoder), plan}});
    }

    // One chunk per choice at site 0; the other sites run as an odometer.
    const auto first = instance.feasible_configs(0);
    std::vector<std::vector<FrontPoint>> chunks(first.size());
    parallel_for(first.size(), worker_count(), [&](std::size_t chunk) {
        Archive archive;
        std::vector<std::size_t> digit(m, 0);
        Plan plan = empty_plan(instance);
        plan.genes[0] = first[chunk];
        for (std::size_t i = 1; i < m; ++i) plan.genes[i] = instance.feasible_configs(i)[0];
        for (;;) {
            const auto o = evaluate_with(instance, plan, decoder);
            archive.offer(minimized(o), o, plan);
            std::size_t i = 1;
            for (; i < m; ++i) {
                const auto options = instance.feasible_configs(i);
                if (++digit[i] < options.size()) {
                    plan.genes[i] = options[digit[i]];
                    break;
                }
                digit[i] = 0;
                plan.genes[i] = options[0];
            }
            if (i == m) break;
        }
        chunks[chunk] = archive.take();
    });

    std::vector<FrontPoint> all;
    for (auto& c : chunks) std::move(c.begin(), c.end(), std::back_inserter(all));
    return nondominated(std::move(all));
}

// ---------------------------------------------------------------------------

Algorithm parse_algorithm(const std::string& name) {
    if (name == "nsga2") return Algorithm::nsga2;
    if (name == "spea2") return Algorithm::spea2;
    if (name == "pr-vol") return Algorithm::pr_vol;
    if (name == "pr-dist") return Algorithm::pr_dist;
    if (name == "pr-cost") return Algorithm::pr_cost;
    if (name == "pr-mo") return Algorithm::pr_mo;
    throw std::invalid_argument("unknown algorithm '" + name + "' (expected nsga2|spea2|pr-vol|pr-dist|pr-cost|pr-mo)");
}

const char* to_string(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::nsga2: return "nsga2";
        case Algorithm::spea2: return "spea2";
        case Algorithm::pr_vol: return "pr-vol";
        case Algorithm::pr_dist: return "pr-dist";
        case Algorithm::pr_cost: return "pr-cost";
        case Algorithm::pr_mo: return "pr-mo";
    }
    return "?";
}

bool is_moea(Algorithm a) noexcept { return a == Algorithm::nsga2 || a == Algorithm::spea2; }

Front solve(const Instance& instance, Algorithm algorithm, const SolveOptions& options) {
    switch (algorithm) {
        case Algorithm::nsga2: return nsga2(instance, options.ea);
        case Algorithm::spea2: return spea2(instance, options.ea);
        default: break;
    }
    const auto ranking = rank_sites(instance, options.pr);
    if (algorithm == Algorithm::pr_mo) {
        const Front raw = pr_mo(instance, ranking);
        if (options.ea.decoder == DecoderKind::greedy) return raw;
        std::vector<FrontPoint> pts;
        for (const auto& p : raw.points) pts.push_back({evaluate_with(instance, *p.plan, options.ea.decoder), p.plan});
        return nondominated(std::move(pts));
    }
    Plan plan = algorithm == Algorithm::pr_vol    ? pr_vol(instance, ranking)
                : algorithm == Algorithm::pr_dist ? pr_dist(instance, ranking)
                                                  : pr_cost(instance, ranking);
    const auto o = evaluate_with(instance, plan, options.ea.decoder);
    return nondominated({{o, std::move(plan)}});
}

Summary summarize(std::vector<double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    s.min = values.front();
    s.max = values.back();
    s.median = quantile(0.5);
    s.iqr = quantile(0.75) - quantile(0.25);
    return s;
}

std::size_t worker_count() {
    if (const char* env = std::getenv("GAP_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

BatchReport run_batch(const Instance& instance, std::span<const Algorithm> algorithms, std::size_t n_runs,
                      std::uint64_t base_seed, const SolveOptions& options) {
    if (n_runs == 0) throw std::invalid_argument("run_batch: n_runs must be positive");
    BatchReport report;
    report.n_runs = n_runs;
    report.base_seed = base_seed;

    struct Task {
        std::size_t algorithm;
        std::size_t run;
    };
    std::vector<Task> tasks;
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
        AlgorithmReport ar;
        ar.algorithm = algorithms[a];
        const std::size_t runs = is_moea(algorithms[a]) ? n_runs : 1;
        ar.runs.resize(runs);
        for (std::size_t r = 0; r < runs; ++r) tasks.push_back({a, r});
        report.algorithms.push_back(std::move(ar));
    }

    parallel_for(tasks.size(), worker_count(), [&](std::size_t k) {
        const auto [a, r] = tasks[k];
        SolveOptions opt = options;
        opt.ea.seed = base_seed + r;
        const auto start = std::chrono::steady_clock::now();
        RunResult& out = report.algorithms[a].runs[r];
        out.seed = opt.ea.seed;
        out.front = solve(instance, algorithms[a], opt);
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    std::vector<Front> all;
    for (const auto& ar : report.algorithms) {
        for (const auto& run : ar.runs) all.push_back(run.front);
    }
    report.reference = reference_front(all);

    for (auto& ar : report.algorithms) {
        std::vector<double> rhvs, spreads, nds;
        std::vector<Front> mine;
        for (auto& run : ar.runs) {
            run.rhv = rhv(run.front, report.reference);
            run.spread = spread(run.front, report.reference);
            if (run.rhv) rhvs.push_back(*run.rhv);
            if (run.spread) spreads.push_back(*run.spread);
            nds.push_back(static_cast<double>(run.front.size()));
            mine.push_back(run.front);
        }
        ar.rhv = summarize(rhvs);
        ar.spread = summarize(spreads);
        ar.nd_count = summarize(nds);
        ar.best_compromise = best_compromise(reference_front(mine), report.reference);
    }

    for (const auto& moea : report.algorithms) {
        if (!is_moea(moea.algorithm)) continue;
        std::vector<Front> runs;
        for (const auto& run : moea.runs) runs.push_back(run.front);
        const Front pooled = reference_front(runs);
        for (const auto& h : report.algorithms) {
            if (is_moea(h.algorithm) || h.runs.empty() || h.runs.front().front.empty()) continue;
            const auto point = h.algorithm == Algorithm::pr_mo ? h.best_compromise->objectives
                                                               : h.runs.front().front.points.front().objectives;
            report.comparisons.push_back({moea.algorithm, h.algorithm, point, improvement_report(pooled, point)});
        }
    }
    return report;
}

// ---------------------------------------------------------------------------

namespace {

json summary_json(const Summary& s) {
    if (s.count == 0) return {{"count", 0}};
    return {{"count", s.count}, {"min", s.min}, {"median", s.median}, {"max", s.max}, {"iqr", s.iqr}};
}

json objectives_json(const Objectives& o) {
    return {{"cost", o.cost}, {"distance", o.distance}, {"volume", o.volume}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json BatchReport::to_json() const {
    json doc;
    doc["n_runs"] = n_runs;
    doc["base_seed"] = base_seed;
    doc["reference_size"] = reference.size();
    doc["algorithms"] = json::array();
    json timing = json::object();
    for (const auto& ar : algorithms) {
        json a;
        a["algorithm"] = to_string(ar.algorithm);
        a["runs"] = ar.runs.size();
        a["rhv"] = summary_json(ar.rhv);
        a["spread"] = summary_json(ar.spread);
        a["nd_count"] = summary_json(ar.nd_count);
        a["per_run"] = json::array();
        json seconds = json::array();
        for (const auto& run : ar.runs) {
            a["per_run"].push_back({{"seed", run.seed},
                                    {"rhv", optional_json(run.rhv)},
                                    {"spread", optional_json(run.spread)},
                                    {"nd_count", run.front.size()}});
            seconds.push_back(run.seconds);
        }
        if (ar.best_compromise) {
            a["best_compromise"] = objectives_json(ar.best_compromise->objectives);
            if (ar.best_compromise->plan) a["best_compromise"]["genes"] = ar.best_compromise->plan->genes;
        }
        timing[to_string(ar.algorithm)] = std::move(seconds);
        doc["algorithms"].push_back(std::move(a));
    }
    doc["comparisons"] = json::array();
    for (const auto& c : comparisons) {
        json j{{"moea", to_string(c.moea)},
               {"heuristic", to_string(c.heuristic)},
               {"heuristic_point", objectives_json(c.heuristic_point)}};
        if (c.report) {
            auto imp = [](const ObjectiveImprovement& i) { return json{{"average", i.average}, {"best", i.best}}; };
            j["improvement"] = {{"qualifying", c.report->qualifying},
                                {"distance_pct", imp(c.report->distance)},
                                {"cost_pct", imp(c.report->cost)},
                                {"volume_pct", imp(c.report->volume)}};
        } else {
            j["improvement"] = nullptr;
        }
        doc["comparisons"].push_back(std::move(j));
    }
    doc["timing"] = {{"seconds_per_run", std::move(timing)}};
    return doc;
}

}  // namespace gap
