#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gap/model.hpp"

namespace gap {

/// Pareto dominance in all-minimize form.
bool dominates(const ObjVec& a, const ObjVec& b) noexcept;

struct FrontPoint {
    Objectives objectives;
    std::optional<Plan> plan;
};

/// Per-objective bounds of a front in all-minimize form.
struct Bounds {
    ObjVec lo{};
    ObjVec hi{};

    /// Affine map onto [0,1] per objective; a zero-width range maps by offset only.
    ObjVec normalize(const ObjVec& v) const noexcept;
};

struct Front {
    std::vector<FrontPoint> points;

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }

    /// Throws std::logic_error on an empty front.
    Bounds bounds() const;
};

/// Non-dominated subset with duplicate objective vectors collapsed (first
/// occurrence wins), in canonical order: cost, distance, volume descending,
/// then genes.
Front nondominated(std::vector<FrontPoint> points);

/// Canonical ordering used for all front output.
void sort_canonical(std::vector<FrontPoint>& points);

/// Non-dominated filter of the union of fronts.
Front reference_front(std::span<const Front> fronts);

struct Hypervolume {
    double volume = 0.0;
    std::size_t clipped = 0;  // points not strictly inside the reference box
};

/// Exact 3-objective hypervolume by slicing along the last objective.
/// Points that do not strictly dominate `ref` contribute nothing.
Hypervolume hypervolume(std::span<const ObjVec> points, const ObjVec& ref);

/// Reference point used by rhv in normalized space.
inline constexpr double kRefMargin = 1.01;

/// HV(front) / HV(reference), both normalized to the reference bounds.
/// Absent when the reference is empty.
std::optional<double> rhv(const Front& front, const Front& reference);

/// Distribution metric combining gaps to the reference extremes and
/// nearest-neighbour spacing variance. Absent for fewer than two points.
std::optional<double> spread(const Front& front, const Front& reference);

/// Per-objective minima of the reference front.
ObjVec ideal_vector(const Front& reference);

/// Front member nearest (normalized Euclidean) to the reference's ideal
/// vector; ties by lower cost, then lower distance.
std::optional<FrontPoint> best_compromise(const Front& front, const Front& reference);

struct ObjectiveImprovement {
    double average = 0.0;  // percent
    double best = 0.0;     // percent
};

struct ImprovementReport {
    std::size_t qualifying = 0;
    ObjectiveImprovement distance;  // positive = shorter walks
    ObjectiveImprovement cost;      // positive = cheaper
    ObjectiveImprovement volume;    // positive = more waste collected
};

/// Maximum relative volume gap for a front member to be compared.
inline constexpr double kVolumeTolerance = 0.10;

/// Improvements of the members that dominate `heuristic` in distance and
/// cost and collect within 10% of its volume. Absent if none qualify.
std::optional<ImprovementReport> improvement_report(const Front& front, const Objectives& heuristic);

}  // namespace gap
