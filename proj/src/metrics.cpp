#include "gap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gap {

bool dominates(const ObjVec& a, const ObjVec& b) noexcept {
    bool strictly = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
        if (a[k] < b[k]) strictly = true;
    }
    return strictly;
}

ObjVec Bounds::normalize(const ObjVec& v) const noexcept {
    ObjVec out{};
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double range = hi[k] - lo[k];
        out[k] = range > 0.0 ? (v[k] - lo[k]) / range : v[k] - lo[k];
    }
    return out;
}

Bounds Front::bounds() const {
    if (points.empty()) throw std::logic_error("bounds of an empty front");
    Bounds b;
    b.lo.fill(std::numeric_limits<double>::infinity());
    b.hi.fill(-std::numeric_limits<double>::infinity());
    for (const auto& p : points) {
        const auto v = minimized(p.objectives);
        for (std::size_t k = 0; k < v.size(); ++k) {
            b.lo[k] = std::min(b.lo[k], v[k]);
            b.hi[k] = std::max(b.hi[k], v[k]);
        }
    }
    return b;
}

void sort_canonical(std::vector<FrontPoint>& points) {
    std::stable_sort(points.begin(), points.end(), [](const FrontPoint& a, const FrontPoint& b) {
        const auto& x = a.objectives;
        const auto& y = b.objectives;
        if (x.cost != y.cost) return x.cost < y.cost;
        if (x.distance != y.distance) return x.distance < y.distance;
        if (x.volume != y.volume) return x.volume > y.volume;
        if (a.plan.has_value() != b.plan.has_value()) return b.plan.has_value();
        return a.plan && *a.plan < *b.plan;
    });
}

Front nondominated(std::vector<FrontPoint> points) {
    std::vector<ObjVec> v(points.size());
    std::transform(points.begin(), points.end(), v.begin(), [](const auto& p) { return minimized(p.objectives); });

    Front out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < points.size() && keep; ++j) {
            if (j == i) continue;
            if (dominates(v[j], v[i])) keep = false;
            if (j < i && v[j] == v[i]) keep = false;
        }
        if (keep) out.points.push_back(std::move(points[i]));
    }
    sort_canonical(out.points);
    return out;
}

Front reference_front(std::span<const Front> fronts) {
    std::vector<FrontPoint> all;
    for (const auto& f : fronts) all.insert(all.end(), f.points.begin(), f.points.end());
    return nondominated(std::move(all));
}

// ---------------------------------------------------------------------------

Hypervolume hypervolume(std::span<const ObjVec> points, const ObjVec& ref) {
    Hypervolume hv;
    std::vector<ObjVec> inside;
    for (const auto& p : points) {
        if (p[0] < ref[0] && p[1] < ref[1] && p[2] < ref[2]) {
            inside.push_back(p);
        } else {
            ++hv.clipped;
        }
    }
    std::sort(inside.begin(), inside.end(), [](const ObjVec& a, const ObjVec& b) { return a[2] < b[2]; });

    // Active points of the current slice, ordered by (x, y).
    std::vector<ObjVec> active;
    auto slice_area = [&] {
        double area = 0.0;
        double best_y = ref[1];
        for (const auto& p : active) {
            if (p[1] < best_y) {
                area += (ref[0] - p[0]) * (best_y - p[1]);
                best_y = p[1];
            }
        }
        return area;
    };

    std::size_t k = 0;
    while (k < inside.size()) {
        const double z = inside[k][2];
        for (; k < inside.size() && inside[k][2] == z; ++k) {
            const auto& p = inside[k];
            auto at = std::lower_bound(active.begin(), active.end(), p, [](const ObjVec& a, const ObjVec& b) {
                return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
            });
            active.insert(at, p);
        }
        const double next_z = k < inside.size() ? inside[k][2] : ref[2];
        hv.volume += slice_area() * (next_z - z);
    }
    return hv;
}

namespace {

std::vector<ObjVec> normalized_points(const Front& front, const Bounds& b) {
    std::vector<ObjVec> out;
    out.reserve(front.size());
    for (const auto& p : front.points) out.push_back(b.normalize(minimized(p.objectives)));
    return out;
}

double euclidean(const ObjVec& a, const ObjVec& b) noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

}  // namespace

std::optional<double> rhv(const Front& front, const Front& reference) {
    if (reference.empty()) return std::nullopt;
    const auto b = reference.bounds();
    const ObjVec ref{kRefMargin, kRefMargin, kRefMargin};
    const double denom = hypervolume(normalized_points(reference, b), ref).volume;
    if (!(denom > 0.0)) return std::nullopt;
    return hypervolume(normalized_points(front, b), ref).volume / denom;
}

std::optional<double> spread(const Front& front, const Front& reference) {
    if (front.size() < 2 || reference.empty()) return std::nullopt;
    const auto b = reference.bounds();

    auto pts = normalized_points(front, b);
    std::sort(pts.begin(), pts.end());
    auto refs = normalized_points(reference, b);
    std::sort(refs.begin(), refs.end());

    double extreme_gap = 0.0;
    for (std::size_t h = 0; h < 3; ++h) {
        // Lowest value of objective h; lexicographic order decides ties.
        const auto extreme = *std::min_element(refs.begin(), refs.end(), [h](const ObjVec& x, const ObjVec& y) {
            return x[h] != y[h] ? x[h] < y[h] : x < y;
        });
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& p : pts) nearest = std::min(nearest, euclidean(p, extreme));
        extreme_gap += nearest;
    }

    std::vector<double> nn(pts.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (i != j) nn[i] = std::min(nn[i], euclidean(pts[i], pts[j]));
        }
    }
    const double mean = std::accumulate(nn.begin(), nn.end(), 0.0) / static_cast<double>(nn.size());
    double dev = 0.0;
    for (double d : nn) dev += (mean - d) * (mean - d);

    const double denom = extreme_gap + static_cast<double>(pts.size()) * mean;
    if (!(denom > 0.0)) return std::nullopt;
    return (extreme_gap + dev) / denom;
}

ObjVec ideal_vector(const Front& reference) {
    return reference.bounds().lo;
}

std::optional<FrontPoint> best_compromise(const Front& front, const Front& reference) {
    if (front.empty() || reference.empty()) return std::nullopt;
    const auto b = reference.bounds();
    const auto ideal = b.normalize(ideal_vector(reference));

    const FrontPoint* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& p : front.points) {
        const double d = euclidean(b.normalize(minimized(p.objectives)), ideal);
        bool better = d < best_d;
        if (!better && d == best_d && best) {
            const auto& x = p.objectives;
            const auto& y = best->objectives;
            better = x.cost != y.cost ? x.cost < y.cost : x.distance < y.distance;
        }
        if (better) {
            best = &p;
            best_d = d;
        }
    }
    return *best;
}

std::optional<ImprovementReport> improvement_report(const Front& front, const Objectives& heuristic) {
    auto pct = [](double reference, double delta) { return reference != 0.0 ? 100.0 * delta / reference : 0.0; };

    ImprovementReport r;
    r.distance.best = r.cost.best = r.volume.best = -std::numeric_limits<double>::infinity();
    for (const auto& p : front.points) {
        const auto& m = p.objectives;
        const bool weakly = m.distance <= heuristic.distance && m.cost <= heuristic.cost;
        const bool strictly = m.distance < heuristic.distance || m.cost < heuristic.cost;
        const bool close = std::abs(m.volume - heuristic.volume) <= kVolumeTolerance * std::abs(heuristic.volume);
        if (!(weakly && strictly && close)) continue;

        const double dd = pct(heuristic.distance, heuristic.distance - m.distance);
        const double dc = pct(heuristic.cost, heuristic.cost - m.cost);
        const double dv = pct(heuristic.volume, m.volume - heuristic.volume);
        r.distance.average += dd;
        r.cost.average += dc;
        r.volume.average += dv;
        r.distance.best = std::max(r.distance.best, dd);
        r.cost.best = std::max(r.cost.best, dc);
        r.volume.best = std::max(r.volume.best, dv);
        ++r.qualifying;
    }
    if (r.qualifying == 0) return std::nullopt;
    const auto n = static_cast<double>(r.qualifying);
    r.distance.average /= n;
    r.cost.average /= n;
    r.volume.average /= n;
    return r;
}

}  // namespace gap
