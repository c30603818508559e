#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gap/assign.hpp"
#include "gap/metrics.hpp"
#include "gap/model.hpp"
#include "gap/rng.hpp"

namespace gap {

struct EAParams {
    std::size_t pop_size = 100;
    std::size_t generations = 1000;
    double p_crossover = 0.9;
    double p_mutation = 0.01;  // per gene
    std::size_t elite_size = 20;
    std::size_t tournament_size = 2;
    std::uint64_t seed = 1;
    DecoderKind decoder = DecoderKind::greedy;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

struct Individual {
    Plan plan;
    Objectives objectives;
    ObjVec key{};  // minimized(objectives)
    int rank = 0;
    double crowding = 0.0;
    double fitness = 0.0;  // SPEA2 raw + density, lower is better
};

void evaluate_individual(const Instance& instance, Individual& ind, DecoderKind decoder);

/// Each gene drawn uniformly from the configurations that fit its site.
std::vector<Individual> init_population(const Instance& instance, const EAParams& params, Rng& rng);

/// Two-point crossover: swaps genes in [lo, hi) where both cut points are
/// uniform in [0, M].
std::pair<Plan, Plan> crossover_2px(const Plan& a, const Plan& b, Rng& rng);
std::pair<Plan, Plan> crossover_2px_at(const Plan& a, const Plan& b, std::size_t lo, std::size_t hi);

/// Resets each gene, with probability p_mutation, to a uniform draw from
/// the configurations fitting that site.
Plan mutate_reset(const Instance& instance, Plan plan, double p_mutation, Rng& rng);

/// Fronts of indices by domination rank; each front lists indices ascending.
std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const ObjVec> points);

/// Crowding distance within one front. Per-objective boundary members get
/// +infinity; interior members sum neighbour gaps normalized by the range.
std::vector<double> crowding_distance(std::span<const ObjVec> front);

struct Spea2Fitness {
    std::vector<int> strength;     // how many members each one dominates
    std::vector<double> raw;       // sum of strengths of its dominators
    std::vector<double> density;   // 1 / (sigma_k + 2)
    std::vector<double> fitness;   // raw + density
};

/// SPEA2 fitness over a union of population and archive. sigma_k is the
/// distance to the k-th nearest neighbour, k = floor(sqrt(n)), measured
/// after normalizing each objective to the union's range.
Spea2Fitness spea2_fitness(std::span<const ObjVec> points);

/// Indices (ascending) kept after iteratively dropping the member whose
/// sorted neighbour-distance list is lexicographically smallest, until at
/// most `limit` remain. Distances use the members' normalized range.
std::vector<std::size_t> truncate_archive(std::span<const ObjVec> members, std::size_t limit);

/// Called once per generation with the survivors (NSGA-II) or the archive
/// (SPEA2). Generation 0 is the initial population.
using GenerationObserver = std::function<void(std::size_t generation, std::span<const Individual>)>;

/// NSGA-II with (mu + lambda) survival, lambda = mu, binary tournament on
/// (rank, crowding). Returns the non-dominated members of the final
/// population.
Front nsga2(const Instance& instance, const EAParams& params, const GenerationObserver& observer = {});

/// SPEA2 with an elite archive of at most elite_size non-dominated members.
/// Returns the final archive.
Front spea2(const Instance& instance, const EAParams& params, const GenerationObserver& observer = {});

}  // namespace gap
