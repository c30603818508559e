#include "gap/assign.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace gap {

namespace {

constexpr double kFlowEps = 1e-12;
constexpr double kCheckEps = 1e-9;

void require_plan_shape(const Instance& instance, const Plan& plan) {
    if (plan.genes.size() != instance.num_sites()) {
        throw std::invalid_argument("plan has " + std::to_string(plan.genes.size()) + " genes, instance has " +
                                    std::to_string(instance.num_sites()) + " sites");
    }
    for (std::size_t i = 0; i < plan.genes.size(); ++i) {
        const int g = plan.genes[i];
        if (g < 0 || static_cast<std::size_t>(g) >= instance.num_configs()) {
            throw std::out_of_range("gene " + std::to_string(i) + " = " + std::to_string(g) +
                                    " is not a catalog id");
        }
    }
}

// Shared by decode_greedy and evaluate_greedy so both see the exact same
// floating-point sequence.
template <class Sink>
void pour_greedy(const Instance& instance, const Plan& plan, std::vector<double>& remaining, Sink&& sink) {
    require_plan_shape(instance, plan);
    const std::size_t m = instance.num_sites();
    remaining.resize(m);
    for (std::size_t i = 0; i < m; ++i) remaining[i] = instance.config(plan.genes[i]).capacity;

    const auto& gens = instance.generators();
    for (std::size_t p = 0; p < gens.size(); ++p) {
        const double b = gens[p].waste;
        if (!(b > 0.0)) continue;
        double left = b;
        for (int site : instance.reachable(p)) {
            if (!(left > 0.0)) break;
            double& cap = remaining[static_cast<std::size_t>(site)];
            if (!(cap > 0.0)) continue;
            double amount;
            if (left <= cap) {
                amount = left;
                cap -= left;
                left = 0.0;
            } else {
                amount = cap;
                left -= cap;
                cap = 0.0;
            }
            sink(p, site, amount / b);
        }
    }
}

}  // namespace

double Assignment::fraction(std::size_t generator, int site) const noexcept {
    if (generator >= rows.size()) return 0.0;
    double f = 0.0;
    for (const auto& s : rows[generator]) {
        if (s.site == site) f += s.fraction;
    }
    return f;
}

DecoderKind parse_decoder(const std::string& name) {
    if (name == "greedy") return DecoderKind::greedy;
    if (name == "exact") return DecoderKind::exact;
    throw std::invalid_argument("unknown decoder '" + name + "' (expected greedy|exact)");
}

const char* to_string(DecoderKind kind) noexcept {
    return kind == DecoderKind::greedy ? "greedy" : "exact";
}

Assignment decode_greedy(const Instance& instance, const Plan& plan) {
    Assignment a(instance.num_generators());
    std::vector<double> remaining;
    pour_greedy(instance, plan, remaining, [&](std::size_t p, int site, double f) {
        a.rows[p].push_back({site, f});
    });
    return a;
}

Objectives evaluate_greedy(const Instance& instance, const Plan& plan) {
    thread_local std::vector<double> remaining;
    Objectives o;
    const auto& gens = instance.generators();
    pour_greedy(instance, plan, remaining, [&](std::size_t p, int site, double f) {
        o.volume += f * gens[p].waste;
        o.distance += instance.distance(p, static_cast<std::size_t>(site)) * f;
    });
    for (int g : plan.genes) o.cost += instance.config(g).cost;
    return o;
}

// ---------------------------------------------------------------------------
// Min-cost max-flow by successive shortest paths (Bellman-Ford on the
// residual graph). Capacities are real-valued volumes.

namespace {

class FlowNetwork {
public:
    struct Edge {
        int to;
        int rev;
        double cap;
        double cost;
    };

    explicit FlowNetwork(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

    // Returns the index of the forward edge inside adj_[from].
    int add_edge(int from, int to, double cap, double cost) {
        auto& a = adj_[static_cast<std::size_t>(from)];
        auto& b = adj_[static_cast<std::size_t>(to)];
        a.push_back({to, static_cast<int>(b.size()), cap, cost});
        b.push_back({from, static_cast<int>(a.size()) - 1, 0.0, -cost});
        return static_cast<int>(a.size()) - 1;
    }

    const Edge& edge(int from, int index) const {
        return adj_[static_cast<std::size_t>(from)][static_cast<std::size_t>(index)];
    }

    void min_cost_max_flow(int source, int sink) {
        const std::size_t n = adj_.size();
        std::vector<double> dist(n);
        std::vector<int> prev_node(n), prev_edge(n), relax_count(n);
        std::vector<char> queued(n);

        for (;;) {
            std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
            std::fill(prev_node.begin(), prev_node.end(), -1);
            std::fill(relax_count.begin(), relax_count.end(), 0);
            std::fill(queued.begin(), queued.end(), 0);
            dist[static_cast<std::size_t>(source)] = 0.0;
            std::deque<int> queue{source};
            queued[static_cast<std::size_t>(source)] = 1;

            while (!queue.empty()) {
                const int u = queue.front();
                queue.pop_front();
                const auto uu = static_cast<std::size_t>(u);
                queued[uu] = 0;
                for (std::size_t k = 0; k < adj_[uu].size(); ++k) {
                    const Edge& e = adj_[uu][k];
                    if (e.cap <= kFlowEps) continue;
                    const auto v = static_cast<std::size_t>(e.to);
                    const double nd = dist[uu] + e.cost;
                    if (nd < dist[v] - kFlowEps) {
                        dist[v] = nd;
                        prev_node[v] = u;
                        prev_edge[v] = static_cast<int>(k);
                        // Round-off can fake a negative cycle; cap the work per node.
                        if (!queued[v] && ++relax_count[v] <= static_cast<int>(n)) {
                            queued[v] = 1;
                            queue.push_back(e.to);
                        }
                    }
                }
            }

            const auto t = static_cast<std::size_t>(sink);
            if (prev_node[t] < 0) break;

            double push = std::numeric_limits<double>::infinity();
            for (int v = sink; v != source; v = prev_node[static_cast<std::size_t>(v)]) {
                const auto vv = static_cast<std::size_t>(v);
                push = std::min(push, adj_[static_cast<std::size_t>(prev_node[vv])]
                                          [static_cast<std::size_t>(prev_edge[vv])].cap);
            }
            if (!(push > kFlowEps)) break;
            for (int v = sink; v != source; v = prev_node[static_cast<std::size_t>(v)]) {
                const auto vv = static_cast<std::size_t>(v);
                Edge& e = adj_[static_cast<std::size_t>(prev_node[vv])][static_cast<std::size_t>(prev_edge[vv])];
                e.cap -= push;
                adj_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)].cap += push;
            }
        }
    }

private:
    std::vector<std::vector<Edge>> adj_;
};

}  // namespace

Assignment decode_exact(const Instance& instance, const Plan& plan) {
    require_plan_shape(instance, plan);
    const std::size_t n = instance.num_generators();
    const std::size_t m = instance.num_sites();
    if (n * m > kExactDecoderLimit) {
        throw std::length_error("decode_exact: N*M = " + std::to_string(n * m) + " exceeds " +
                                std::to_string(kExactDecoderLimit));
    }

    const int source = 0;
    const int sink = static_cast<int>(n + m + 1);
    auto gen_node = [](std::size_t p) { return static_cast<int>(1 + p); };
    auto site_node = [n](std::size_t i) { return static_cast<int>(1 + n + i); };

    FlowNetwork net(static_cast<int>(n + m + 2));
    struct Arc {
        std::size_t generator;
        int site;
        int edge;
        double cap;
    };
    std::vector<Arc> arcs;

    for (std::size_t i = 0; i < m; ++i) {
        const double cap = instance.config(plan.genes[i]).capacity;
        if (cap > 0.0) net.add_edge(site_node(i), sink, cap, 0.0);
    }
    for (std::size_t p = 0; p < n; ++p) {
        const double b = instance.generators()[p].waste;
        if (!(b > 0.0)) continue;
        net.add_edge(source, gen_node(p), b, 0.0);
        for (int site : instance.reachable(p)) {
            const auto i = static_cast<std::size_t>(site);
            if (!(instance.config(plan.genes[i]).capacity > 0.0)) continue;
            const int e = net.add_edge(gen_node(p), site_node(i), b, instance.distance(p, i) / b);
            arcs.push_back({p, site, e, b});
        }
    }

    net.min_cost_max_flow(source, sink);

    Assignment a(n);
    for (const auto& arc : arcs) {
        const double flow = arc.cap - net.edge(gen_node(arc.generator), arc.edge).cap;
        if (flow <= kFlowEps) continue;
        const double b = instance.generators()[arc.generator].waste;
        a.rows[arc.generator].push_back({arc.site, std::clamp(flow / b, 0.0, 1.0)});
    }
    for (auto& row : a.rows) {
        std::sort(row.begin(), row.end(), [&](const Share& x, const Share& y) { return x.site < y.site; });
    }
    return a;
}

Assignment decode(const Instance& instance, const Plan& plan, DecoderKind kind) {
    return kind == DecoderKind::greedy ? decode_greedy(instance, plan) : decode_exact(instance, plan);
}

Objectives evaluate_with(const Instance& instance, const Plan& plan, DecoderKind kind) {
    if (kind == DecoderKind::greedy) return evaluate_greedy(instance, plan);
    return evaluate(instance, plan, decode_exact(instance, plan));
}

// ---------------------------------------------------------------------------

std::string Violation::to_string() const {
    std::ostringstream os;
    os << constraint << " violated";
    if (generator >= 0) os << " at generator " << generator;
    if (site >= 0) os << (generator >= 0 ? ", site " : " at site ") << site;
    if (!detail.empty()) os << ": " << detail;
    return os.str();
}

std::vector<Violation> check_constraints(const Instance& instance, const Plan& plan, const Assignment& assignment) {
    std::vector<Violation> out;
    const std::size_t n = instance.num_generators();
    const std::size_t m = instance.num_sites();

    if (plan.genes.size() != m) {
        out.push_back({"shape", -1, -1,
                       "plan has " + std::to_string(plan.genes.size()) + " genes, expected " + std::to_string(m)});
        return out;
    }
    if (assignment.rows.size() != n) {
        out.push_back({"shape", -1, -1,
                       "assignment has " + std::to_string(assignment.rows.size()) + " rows, expected " +
                           std::to_string(n)});
        return out;
    }

    std::vector<double> capacity(m, 0.0);
    std::vector<double> load(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const int g = plan.genes[i];
        const int si = static_cast<int>(i);
        if (g < 0 || static_cast<std::size_t>(g) >= instance.num_configs()) {
            out.push_back({"gene", -1, si, "configuration " + std::to_string(g) + " is not in the catalog"});
            continue;
        }
        const auto& c = instance.config(g);
        capacity[i] = c.capacity;
        if (c.space_used > instance.sites()[i].space + kSpaceEps) {
            std::ostringstream os;
            os << "configuration " << g << " needs " << c.space_used << " m2, site has "
               << instance.sites()[i].space;
            out.push_back({"space", -1, si, os.str()});
        }
    }

    for (std::size_t p = 0; p < n; ++p) {
        const int pi = static_cast<int>(p);
        const double b = instance.generators()[p].waste;
        double sum = 0.0;
        for (const auto& s : assignment.rows[p]) {
            if (s.site < 0 || static_cast<std::size_t>(s.site) >= m) {
                out.push_back({"shape", pi, s.site, "site index out of range"});
                continue;
            }
            const auto i = static_cast<std::size_t>(s.site);
            if (!(s.fraction >= 0.0 && s.fraction <= 1.0 + kCheckEps)) {
                std::ostringstream os;
                os << "fraction " << s.fraction << " outside [0,1]";
                out.push_back({"fraction-range", pi, s.site, os.str()});
            }
            if (s.fraction > 0.0 && instance.distance(p, i) > instance.max_walk()) {
                std::ostringstream os;
                os << "distance " << instance.distance(p, i) << " m exceeds D = " << instance.max_walk();
                out.push_back({"walk-limit", pi, s.site, os.str()});
            }
            sum += s.fraction;
            load[i] += b * s.fraction;
        }
        if (sum > 1.0 + kCheckEps) {
            std::ostringstream os;
            os << "fractions sum to " << sum << " > 1";
            out.push_back({"fraction-sum", pi, -1, os.str()});
        }
    }

    for (std::size_t i = 0; i < m; ++i) {
        if (load[i] > capacity[i] + kCheckEps * std::max(1.0, capacity[i])) {
            std::ostringstream os;
            os << "assigned " << load[i] << " m3 exceeds capacity " << capacity[i];
            out.push_back({"capacity", -1, static_cast<int>(i), os.str()});
        }
    }
    return out;
}

std::vector<Violation> check_bin_limits(const Instance& instance, const Plan& plan) {
    std::vector<Violation> out;
    const auto& types = instance.bin_types();
    std::vector<long long> used(types.size(), 0);
    for (int g : plan.genes) {
        if (g < 0 || static_cast<std::size_t>(g) >= instance.num_configs()) continue;
        const auto& c = instance.config(g);
        for (std::size_t j = 0; j < types.size(); ++j) used[j] += c.counts[j];
    }
    for (std::size_t j = 0; j < types.size(); ++j) {
        if (types[j].max_available && used[j] > *types[j].max_available) {
            out.push_back({"bin-limit", -1, -1,
                           "bin type " + types[j].id + " used " + std::to_string(used[j]) + " times, " +
                               std::to_string(*types[j].max_available) + " available"});
        }
    }
    return out;
}

}  // namespace gap
