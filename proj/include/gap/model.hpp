#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace gap {

/// Absolute slack used when comparing footprints against site space.
inline constexpr double kSpaceEps = 1e-9;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct BinType {
    std::string id;
    double unit_cost = 0.0;  // c_j
    double capacity = 0.0;   // C_j, m^3
    double footprint = 0.0;  // e_j, m^2
    std::optional<int> max_available;
};

struct Generator {
    int id = 0;
    Point position;
    double waste = 0.0;  // b_p, m^3 per period
};

struct Site {
    int id = 0;
    Point position;
    double space = 0.0;  // S_i, m^2
};

/// A multiset of bins installable at one site. Derived totals are kept in
/// sync by make_configuration().
struct Configuration {
    int id = 0;
    std::vector<int> counts;
    double space_used = 0.0;
    double cost = 0.0;
    double capacity = 0.0;
};

Configuration make_configuration(int id, std::vector<int> counts, std::span<const BinType> bin_types);

/// All bin multisets fitting `space`, sorted by (space_used, cost, counts).
/// Entry 0 is always the empty configuration.
std::vector<Configuration> enumerate_configs(std::span<const BinType> bin_types, double space);

/// The three standard bin types j1..j3: 1, 2 and 3 m3 at 1000 per m3.
std::vector<BinType> standard_bin_types();

/// The 12-entry catalog for S_i = 5 (a curated subset of
/// what enumerate_configs returns for the same space).
std::vector<Configuration> standard_catalog();

/// Thrown when an instance file or instance data fails validation. The
/// message starts with the offending field path, e.g. "generators[3].waste".
class InstanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raw instance contents as read from a file or built in code.
struct InstanceData {
    std::vector<Generator> generators;
    std::vector<Site> sites;
    std::vector<BinType> bin_types;
    std::vector<Configuration> catalog;           // empty => enumerate per max site space
    std::optional<std::vector<double>> distance;  // row-major N x M
    double max_walk = 300.0;                      // D
};

/// Validated, immutable problem instance with precomputed distance tables.
class Instance {
public:
    explicit Instance(InstanceData data);

    std::size_t num_generators() const noexcept { return generators_.size(); }
    std::size_t num_sites() const noexcept { return sites_.size(); }
    std::size_t num_configs() const noexcept { return catalog_.size(); }

    const std::vector<Generator>& generators() const noexcept { return generators_; }
    const std::vector<Site>& sites() const noexcept { return sites_; }
    const std::vector<BinType>& bin_types() const noexcept { return bin_types_; }
    const std::vector<Configuration>& catalog() const noexcept { return catalog_; }
    const Configuration& config(int id) const { return catalog_.at(static_cast<std::size_t>(id)); }

    double distance(std::size_t generator, std::size_t site) const noexcept {
        return distance_[generator * sites_.size() + site];
    }
    double site_distance(std::size_t a, std::size_t b) const noexcept {
        return site_distance_[a * sites_.size() + b];
    }
    double max_walk() const noexcept { return max_walk_; }
    double total_waste() const noexcept { return total_waste_; }
    bool has_explicit_distance() const noexcept { return explicit_distance_; }
    std::span<const double> distance_matrix() const noexcept { return distance_; }

    /// Sites within max_walk of the generator, ascending by (distance, site id).
    std::span<const int> reachable(std::size_t generator) const noexcept { return reachable_[generator]; }

    /// Catalog ids whose footprint fits the site, ascending.
    std::span<const int> feasible_configs(std::size_t site) const noexcept { return feasible_[site]; }

    double max_config_cost() const noexcept { return max_config_cost_; }

    InstanceData to_data() const;

private:
    std::vector<Generator> generators_;
    std::vector<Site> sites_;
    std::vector<BinType> bin_types_;
    std::vector<Configuration> catalog_;
    std::vector<double> distance_;
    std::vector<double> site_distance_;
    std::vector<std::vector<int>> reachable_;
    std::vector<std::vector<int>> feasible_;
    double max_walk_ = 300.0;
    double total_waste_ = 0.0;
    double max_config_cost_ = 0.0;
    bool explicit_distance_ = false;
};

/// One configuration id per candidate site.
struct Plan {
    std::vector<int> genes;

    friend bool operator==(const Plan&, const Plan&) = default;
    friend auto operator<=>(const Plan&, const Plan&) = default;
};

Plan empty_plan(const Instance& instance);

/// Objective values in their natural sense: volume is maximized, distance
/// and cost are minimized.
struct Objectives {
    double volume = 0.0;
    double distance = 0.0;
    double cost = 0.0;

    friend bool operator==(const Objectives&, const Objectives&) = default;
};

/// Objectives in all-minimize form: (-volume, distance, cost). Negating the
/// volume is exact, unlike subtracting from the total waste.
using ObjVec = std::array<double, 3>;

inline ObjVec minimized(const Objectives& o) noexcept { return {-o.volume, o.distance, o.cost}; }

struct Assignment;

/// Objective values for a decoded plan.
Objectives evaluate(const Instance& instance, const Plan& plan, const Assignment& assignment);

/// Volume-weighted mean walking distance; absent when nothing is collected.
std::optional<double> mean_walk(const Instance& instance, const Assignment& assignment);

// Instance files (JSON).
Instance parse_instance(const nlohmann::json& doc);
nlohmann::json instance_to_json(const Instance& instance);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);

}  // namespace gap
