#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gap/model.hpp"

namespace gap {

/// Part of a generator's waste deposited at one site.
struct Share {
    int site = 0;
    double fraction = 0.0;  // f_pi
};

/// Sparse fractional assignment: one row of shares per generator. The
/// indicator x_pi is implied by a share being present with fraction > 0.
struct Assignment {
    std::vector<std::vector<Share>> rows;

    explicit Assignment(std::size_t num_generators = 0) : rows(num_generators) {}

    double fraction(std::size_t generator, int site) const noexcept;
    bool assigned(std::size_t generator, int site) const noexcept { return fraction(generator, site) > 0.0; }
};

enum class DecoderKind { greedy, exact };

DecoderKind parse_decoder(const std::string& name);
const char* to_string(DecoderKind kind) noexcept;

/// Generators in id order pour their waste into reachable sites nearest
/// first (ties by site id), splitting across sites as each fills up.
/// Waste that finds no remaining capacity stays uncollected.
Assignment decode_greedy(const Instance& instance, const Plan& plan);

/// Same result as evaluate(instance, plan, decode_greedy(instance, plan)),
/// bit for bit, without materializing the assignment.
Objectives evaluate_greedy(const Instance& instance, const Plan& plan);

/// Upper bound on N*M accepted by decode_exact.
inline constexpr std::size_t kExactDecoderLimit = 10'000;

/// Max collected volume, then min fraction-weighted distance, by min-cost
/// max-flow over the arcs with d_pi <= D. Throws std::length_error above
/// kExactDecoderLimit.
Assignment decode_exact(const Instance& instance, const Plan& plan);

Assignment decode(const Instance& instance, const Plan& plan, DecoderKind kind);
Objectives evaluate_with(const Instance& instance, const Plan& plan, DecoderKind kind);

struct Violation {
    std::string constraint;  // "fraction-sum", "space", ..., "gene", "shape", "bin-limit"
    int generator = -1;
    int site = -1;
    std::string detail;

    std::string to_string() const;
};

/// Empty iff the plan and assignment satisfy the model's constraints:
/// per-generator fraction sums, site space, site capacity, the walking
/// threshold and fraction bounds.
std::vector<Violation> check_constraints(const Instance& instance, const Plan& plan, const Assignment& assignment);

/// Global bin-stock check against BinType::max_available, when given.
std::vector<Violation> check_bin_limits(const Instance& instance, const Plan& plan);

}  // namespace gap
