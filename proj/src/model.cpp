#include "gap/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "gap/assign.hpp"

namespace gap {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw InstanceError(path + ": " + what);
}

std::string index_path(const std::string& list, std::size_t k) {
    return list + "[" + std::to_string(k) + "]";
}

void require_finite(double v, const std::string& path) {
    if (!std::isfinite(v)) fail(path, "must be finite");
}

}  // namespace

Configuration make_configuration(int id, std::vector<int> counts, std::span<const BinType> bin_types) {
    if (counts.size() != bin_types.size()) {
        throw std::invalid_argument("configuration " + std::to_string(id) + ": expected " +
                                    std::to_string(bin_types.size()) + " counts");
    }
    Configuration c;
    c.id = id;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        c.space_used += counts[j] * bin_types[j].footprint;
        c.cost += counts[j] * bin_types[j].unit_cost;
        c.capacity += counts[j] * bin_types[j].capacity;
    }
    c.counts = std::move(counts);
    return c;
}

std::vector<Configuration> enumerate_configs(std::span<const BinType> bin_types, double space) {
    std::vector<Configuration> out;
    std::vector<int> counts(bin_types.size(), 0);

    std::function<void(std::size_t, double)> walk = [&](std::size_t j, double used) {
        if (j == bin_types.size()) {
            out.push_back(make_configuration(0, counts, bin_types));
            return;
        }
        for (int n = 0; used + n * bin_types[j].footprint <= space + kSpaceEps; ++n) {
            counts[j] = n;
            walk(j + 1, used + n * bin_types[j].footprint);
        }
        counts[j] = 0;
    };
    walk(0, 0.0);

    std::stable_sort(out.begin(), out.end(), [](const Configuration& a, const Configuration& b) {
        if (a.space_used != b.space_used) return a.space_used < b.space_used;
        if (a.cost != b.cost) return a.cost < b.cost;
        return a.counts < b.counts;
    });
    for (std::size_t k = 0; k < out.size(); ++k) out[k].id = static_cast<int>(k);
    return out;
}

std::vector<BinType> standard_bin_types() {
    return {
        {"j1", 1000.0, 1.0, 1.0, std::nullopt},
        {"j2", 2000.0, 2.0, 2.0, std::nullopt},
        {"j3", 3000.0, 3.0, 3.0, std::nullopt},
    };
}

std::vector<Configuration> standard_catalog() {
    static constexpr std::array<std::array<int, 3>, 12> rows{{
        {0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {4, 0, 0}, {5, 0, 0},
        {1, 1, 0}, {1, 2, 0}, {1, 0, 1}, {0, 1, 0}, {0, 1, 1}, {0, 0, 1},
    }};
    const auto types = standard_bin_types();
    std::vector<Configuration> out;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out.push_back(make_configuration(static_cast<int>(k), {rows[k].begin(), rows[k].end()}, types));
    }
    return out;
}

Instance::Instance(InstanceData data)
    : generators_(std::move(data.generators)),
      sites_(std::move(data.sites)),
      bin_types_(std::move(data.bin_types)),
      catalog_(std::move(data.catalog)),
      max_walk_(data.max_walk) {
    const std::size_t n = generators_.size();
    const std::size_t m = sites_.size();

    if (!(max_walk_ > 0.0) || !std::isfinite(max_walk_)) fail("max_walk", "must be positive and finite");

    for (std::size_t p = 0; p < n; ++p) {
        const auto path = index_path("generators", p);
        const auto& g = generators_[p];
        if (g.id != static_cast<int>(p)) fail(path + ".id", "expected " + std::to_string(p));
        require_finite(g.position.x, path + ".x");
        require_finite(g.position.y, path + ".y");
        require_finite(g.waste, path + ".waste");
        if (g.waste < 0.0) fail(path + ".waste", "must be >= 0");
        total_waste_ += g.waste;
    }

    double max_space = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto path = index_path("sites", i);
        const auto& s = sites_[i];
        if (s.id != static_cast<int>(i)) fail(path + ".id", "expected " + std::to_string(i));
        require_finite(s.position.x, path + ".x");
        require_finite(s.position.y, path + ".y");
        require_finite(s.space, path + ".space");
        if (s.space < 0.0) fail(path + ".space", "must be >= 0");
        max_space = std::max(max_space, s.space);
    }

    for (std::size_t j = 0; j < bin_types_.size(); ++j) {
        const auto path = index_path("bin_types", j);
        const auto& b = bin_types_[j];
        if (b.id.empty()) fail(path + ".id", "must be non-empty");
        for (std::size_t k = 0; k < j; ++k) {
            if (bin_types_[k].id == b.id) fail(path + ".id", "duplicate id '" + b.id + "'");
        }
        require_finite(b.unit_cost, path + ".cost");
        require_finite(b.capacity, path + ".capacity");
        require_finite(b.footprint, path + ".footprint");
        if (b.unit_cost < 0.0) fail(path + ".cost", "must be >= 0");
        if (!(b.capacity > 0.0)) fail(path + ".capacity", "must be > 0");
        if (!(b.footprint > 0.0)) fail(path + ".footprint", "must be > 0");
        if (b.max_available && *b.max_available <= 0) fail(path + ".max_available", "must be > 0");
    }

    if (catalog_.empty()) {
        catalog_ = enumerate_configs(bin_types_, max_space);
    } else {
        for (std::size_t k = 0; k < catalog_.size(); ++k) {
            const auto path = index_path("configs", k);
            auto& c = catalog_[k];
            if (c.id != static_cast<int>(k)) fail(path + ".id", "expected " + std::to_string(k));
            if (c.counts.size() != bin_types_.size()) {
                fail(path + ".counts", "expected " + std::to_string(bin_types_.size()) + " entries");
            }
            for (std::size_t j = 0; j < c.counts.size(); ++j) {
                if (c.counts[j] < 0) fail(path + ".counts[" + std::to_string(j) + "]", "must be >= 0");
            }
            c = make_configuration(c.id, c.counts, bin_types_);
            if (k == 0 && c.capacity != 0.0) fail(path + ".counts", "configuration 0 must be empty");
            if (k > 0 && m > 0 && c.space_used > max_space + kSpaceEps) {
                std::ostringstream os;
                os << "space_used " << c.space_used << " exceeds every site's space (max " << max_space << ")";
                fail(path, os.str());
            }
        }
    }
    for (const auto& c : catalog_) max_config_cost_ = std::max(max_config_cost_, c.cost);

    if (data.distance) {
        explicit_distance_ = true;
        distance_ = std::move(*data.distance);
        if (distance_.size() != n * m) {
            fail("distance_matrix", "expected " + std::to_string(n) + "x" + std::to_string(m) + " entries, got " +
                                        std::to_string(distance_.size()));
        }
        for (std::size_t k = 0; k < distance_.size(); ++k) {
            const auto path = "distance_matrix[" + std::to_string(k / std::max<std::size_t>(m, 1)) + "][" +
                              std::to_string(k % std::max<std::size_t>(m, 1)) + "]";
            require_finite(distance_[k], path);
            if (distance_[k] < 0.0) fail(path, "must be >= 0");
        }
    } else {
        distance_.resize(n * m);
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t i = 0; i < m; ++i) {
                const auto& a = generators_[p].position;
                const auto& b = sites_[i].position;
                distance_[p * m + i] = std::hypot(a.x - b.x, a.y - b.y);
            }
        }
    }

    site_distance_.resize(m * m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a; b < m; ++b) {
            const auto& u = sites_[a].position;
            const auto& v = sites_[b].position;
            const double d = a == b ? 0.0 : std::hypot(u.x - v.x, u.y - v.y);
            site_distance_[a * m + b] = d;
            site_distance_[b * m + a] = d;
        }
    }

    reachable_.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        auto& row = reachable_[p];
        for (std::size_t i = 0; i < m; ++i) {
            if (distance(p, i) <= max_walk_) row.push_back(static_cast<int>(i));
        }
        std::stable_sort(row.begin(), row.end(), [&](int a, int b) {
            const double da = distance(p, static_cast<std::size_t>(a));
            const double db = distance(p, static_cast<std::size_t>(b));
            return da != db ? da < db : a < b;
        });
    }

    feasible_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& c : catalog_) {
            if (c.space_used <= sites_[i].space + kSpaceEps) feasible_[i].push_back(c.id);
        }
    }
}

InstanceData Instance::to_data() const {
    InstanceData d;
    d.generators = generators_;
    d.sites = sites_;
    d.bin_types = bin_types_;
    d.catalog = catalog_;
    if (explicit_distance_) d.distance = distance_;
    d.max_walk = max_walk_;
    return d;
}

Plan empty_plan(const Instance& instance) {
    return Plan{std::vector<int>(instance.num_sites(), 0)};
}

Objectives evaluate(const Instance& instance, const Plan& plan, const Assignment& assignment) {
    const std::size_t n = instance.num_generators();
    const std::size_t m = instance.num_sites();
    if (plan.genes.size() != m) {
        throw std::invalid_argument("plan has " + std::to_string(plan.genes.size()) + " genes, instance has " +
                                    std::to_string(m) + " sites");
    }
    if (assignment.rows.size() != n) {
        throw std::invalid_argument("assignment has " + std::to_string(assignment.rows.size()) +
                                    " rows, instance has " + std::to_string(n) + " generators");
    }
#ifndef NDEBUG
    if (auto v = check_constraints(instance, plan, assignment); !v.empty()) {
        throw std::logic_error("evaluate: infeasible assignment: " + v.front().to_string());
    }
#endif
    Objectives o;
    for (std::size_t p = 0; p < n; ++p) {
        const double b = instance.generators()[p].waste;
        for (const auto& s : assignment.rows[p]) {
            o.volume += s.fraction * b;
            o.distance += instance.distance(p, static_cast<std::size_t>(s.site)) * s.fraction;
        }
    }
    for (int g : plan.genes) o.cost += instance.config(g).cost;
    return o;
}

std::optional<double> mean_walk(const Instance& instance, const Assignment& assignment) {
    double weighted = 0.0;
    double volume = 0.0;
    for (std::size_t p = 0; p < assignment.rows.size(); ++p) {
        const double b = instance.generators()[p].waste;
        for (const auto& s : assignment.rows[p]) {
            weighted += instance.distance(p, static_cast<std::size_t>(s.site)) * s.fraction * b;
            volume += s.fraction * b;
        }
    }
    if (!(volume > 0.0)) return std::nullopt;
    return weighted / volume;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const json& field(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing");
    return *it;
}

double number(const json& obj, const char* key, const std::string& path) {
    const auto& v = field(obj, key, path);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

int integer(const json& obj, const char* key, const std::string& path) {
    const auto& v = field(obj, key, path);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

const json& array(const json& obj, const char* key) {
    const auto& v = field(obj, key, "");
    if (!v.is_array()) fail(key, "expected an array");
    return v;
}

}  // namespace

Instance parse_instance(const json& doc) {
    if (!doc.is_object()) fail("$", "expected a JSON object");
    InstanceData d;

    const auto& gens = array(doc, "generators");
    for (std::size_t k = 0; k < gens.size(); ++k) {
        const auto path = index_path("generators", k);
        const auto& g = gens[k];
        if (!g.is_object()) fail(path, "expected an object");
        d.generators.push_back({integer(g, "id", path), {number(g, "x", path), number(g, "y", path)},
                                number(g, "waste", path)});
    }

    const auto& sites = array(doc, "sites");
    for (std::size_t k = 0; k < sites.size(); ++k) {
        const auto path = index_path("sites", k);
        const auto& s = sites[k];
        if (!s.is_object()) fail(path, "expected an object");
        d.sites.push_back({integer(s, "id", path), {number(s, "x", path), number(s, "y", path)},
                           number(s, "space", path)});
    }

    const auto& types = array(doc, "bin_types");
    for (std::size_t k = 0; k < types.size(); ++k) {
        const auto path = index_path("bin_types", k);
        const auto& b = types[k];
        if (!b.is_object()) fail(path, "expected an object");
        const auto& id = field(b, "id", path);
        BinType t;
        t.id = id.is_string() ? id.get<std::string>() : id.dump();
        t.unit_cost = number(b, "cost", path);
        t.capacity = number(b, "capacity", path);
        t.footprint = number(b, "footprint", path);
        if (b.contains("max_available") && !b["max_available"].is_null()) {
            t.max_available = integer(b, "max_available", path);
        }
        d.bin_types.push_back(std::move(t));
    }

    if (doc.contains("configs") && !doc["configs"].is_null()) {
        const auto& cfgs = array(doc, "configs");
        for (std::size_t k = 0; k < cfgs.size(); ++k) {
            const auto path = index_path("configs", k);
            const auto& c = cfgs[k];
            if (!c.is_object()) fail(path, "expected an object");
            const auto& counts = field(c, "counts", path);
            if (!counts.is_array()) fail(path + ".counts", "expected an array");
            Configuration cfg;
            cfg.id = integer(c, "id", path);
            for (std::size_t j = 0; j < counts.size(); ++j) {
                if (!counts[j].is_number_integer()) {
                    fail(path + ".counts[" + std::to_string(j) + "]", "expected an integer");
                }
                cfg.counts.push_back(counts[j].get<int>());
            }
            d.catalog.push_back(std::move(cfg));
        }
    }

    if (doc.contains("distance_matrix") && !doc["distance_matrix"].is_null()) {
        const auto& dm = doc["distance_matrix"];
        if (!dm.is_array()) fail("distance_matrix", "expected an array");
        std::vector<double> flat;
        for (std::size_t r = 0; r < dm.size(); ++r) {
            if (dm[r].is_array()) {
                if (dm[r].size() != d.sites.size()) {
                    fail("distance_matrix[" + std::to_string(r) + "]",
                         "expected " + std::to_string(d.sites.size()) + " columns");
                }
                for (std::size_t c = 0; c < dm[r].size(); ++c) {
                    if (!dm[r][c].is_number()) {
                        fail("distance_matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                             "expected a number");
                    }
                    flat.push_back(dm[r][c].get<double>());
                }
            } else if (dm[r].is_number()) {
                flat.push_back(dm[r].get<double>());
            } else {
                fail("distance_matrix[" + std::to_string(r) + "]", "expected a number or a row");
            }
        }
        d.distance = std::move(flat);
    }

    if (doc.contains("max_walk")) {
        if (!doc["max_walk"].is_number()) fail("max_walk", "expected a number");
        d.max_walk = doc["max_walk"].get<double>();
    }

    return Instance(std::move(d));
}

json instance_to_json(const Instance& instance) {
    json doc;
    doc["generators"] = json::array();
    for (const auto& g : instance.generators()) {
        doc["generators"].push_back({{"id", g.id}, {"x", g.position.x}, {"y", g.position.y}, {"waste", g.waste}});
    }
    doc["sites"] = json::array();
    for (const auto& s : instance.sites()) {
        doc["sites"].push_back({{"id", s.id}, {"x", s.position.x}, {"y", s.position.y}, {"space", s.space}});
    }
    doc["bin_types"] = json::array();
    for (const auto& b : instance.bin_types()) {
        json t = {{"id", b.id}, {"cost", b.unit_cost}, {"capacity", b.capacity}, {"footprint", b.footprint}};
        if (b.max_available) t["max_available"] = *b.max_available;
        doc["bin_types"].push_back(std::move(t));
    }
    doc["configs"] = json::array();
    for (const auto& c : instance.catalog()) {
        doc["configs"].push_back({{"id", c.id}, {"counts", c.counts}});
    }
    if (instance.has_explicit_distance()) {
        const std::size_t m = instance.num_sites();
        json rows = json::array();
        for (std::size_t p = 0; p < instance.num_generators(); ++p) {
            json row = json::array();
            for (std::size_t i = 0; i < m; ++i) row.push_back(instance.distance(p, i));
            rows.push_back(std::move(row));
        }
        doc["distance_matrix"] = std::move(rows);
    }
    doc["max_walk"] = instance.max_walk();
    return doc;
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InstanceError(path.string() + ": cannot open");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw InstanceError(path.string() + ": parse error: " + e.what());
    }
    return parse_instance(doc);
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << instance_to_json(instance).dump(2) << '\n';
}

}  // namespace gap
