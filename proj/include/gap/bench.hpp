#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gap/assign.hpp"
#include "gap/metrics.hpp"
#include "gap/model.hpp"
#include "gap/moea.hpp"
#include "gap/pagerank.hpp"

namespace gap {

/// Synthetic scenario. A zero width/height means "derive from n_sites":
/// a square of side 100 m * sqrt(n_sites), dense enough that a generator
/// almost surely has a site within 300 m.
struct ScenarioSpec {
    std::size_t n_generators = 82;
    std::size_t n_sites = 40;
    double width = 0.0;
    double height = 0.0;
    double waste_mean = 1.0;    // m^3 per generator
    double waste_jitter = 0.3;  // relative, uniform in [-jitter, +jitter]
    double demand_factor = 1.0; // 0.8 low, 1.0 normal, 1.2 high
    double site_space = 5.0;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Uniform positions for generators and sites, standard catalog, D = 300 m.
/// Waste is base * demand_factor with base drawn independently of the
/// factor, so changing only the factor scales every waste value exactly.
Instance generate_instance(const ScenarioSpec& spec);

/// Largest genotype count exhaustive_front will enumerate.
inline constexpr double kExhaustiveLimit = 1e7;

/// Evaluates every site-feasible genotype and returns the non-dominated
/// set: the true front for the chosen decoder. Throws std::length_error
/// when the genotype count exceeds kExhaustiveLimit.
Front exhaustive_front(const Instance& instance, DecoderKind decoder = DecoderKind::greedy);

enum class Algorithm { nsga2, spea2, pr_vol, pr_dist, pr_cost, pr_mo };

Algorithm parse_algorithm(const std::string& name);
const char* to_string(Algorithm a) noexcept;
bool is_moea(Algorithm a) noexcept;

struct SolveOptions {
    EAParams ea;
    PageRankOptions pr;
};

/// Runs one algorithm. PageRank heuristics yield a one-point front (pr-mo
/// its aggregated front), evaluated with options.ea.decoder.
Front solve(const Instance& instance, Algorithm algorithm, const SolveOptions& options);

struct Summary {
    std::size_t count = 0;
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
    double iqr = 0.0;
};

/// Order statistics with linear interpolation between closest ranks.
Summary summarize(std::vector<double> values);

struct RunResult {
    std::uint64_t seed = 0;
    Front front;
    std::optional<double> rhv;
    std::optional<double> spread;
    double seconds = 0.0;
};

struct AlgorithmReport {
    Algorithm algorithm = Algorithm::nsga2;
    std::vector<RunResult> runs;
    Summary rhv;
    Summary spread;
    Summary nd_count;
    std::optional<FrontPoint> best_compromise;  // of the pooled runs
};

struct Comparison {
    Algorithm moea = Algorithm::nsga2;
    Algorithm heuristic = Algorithm::pr_vol;
    Objectives heuristic_point;
    std::optional<ImprovementReport> report;
};

struct BatchReport {
    std::size_t n_runs = 0;
    std::uint64_t base_seed = 0;
    Front reference;
    std::vector<AlgorithmReport> algorithms;
    std::vector<Comparison> comparisons;

    /// Deterministic for a given base seed; wall times live under "timing".
    nlohmann::json to_json() const;
};

/// Worker threads for batch work: GAP_THREADS if set, else the hardware
/// concurrency, at least one.
std::size_t worker_count();

/// n_runs seeded runs (seed = base_seed + run) of each MOEA, one run of each
/// deterministic heuristic, all scored against the pooled reference front.
BatchReport run_batch(const Instance& instance, std::span<const Algorithm> algorithms, std::size_t n_runs,
                      std::uint64_t base_seed, const SolveOptions& options);

}  // namespace gap
