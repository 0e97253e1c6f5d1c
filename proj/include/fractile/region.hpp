#pragma once

// RegionApprox: the two region backends (exact 1-D interval unions, 2-D
// occupancy rasters) behind one variant, plus Hausdorff distance and the
// erosion-based interior surrogate.

#include <variant>

#include "fractile/interval_set.hpp"
#include "fractile/raster.hpp"

namespace fractile {

struct PointCloud {
    int dim = 0;
    std::vector<Vec> points;
    uint64_t seed = 0;
};

class RegionApprox {
public:
    RegionApprox() = default;
    RegionApprox(IntervalSet s) : v_(std::move(s)) {}
    RegionApprox(Raster r) : v_(std::move(r)) {}

    bool is_intervals() const { return std::holds_alternative<IntervalSet>(v_); }
    bool is_raster() const { return std::holds_alternative<Raster>(v_); }
    int dim() const { return is_intervals() ? 1 : 2; }

    const IntervalSet& intervals() const { return std::get<IntervalSet>(v_); }
    IntervalSet& intervals() { return std::get<IntervalSet>(v_); }
    const Raster& raster() const { return std::get<Raster>(v_); }
    Raster& raster() { return std::get<Raster>(v_); }

    bool empty() const {
        return is_intervals() ? intervals().empty() : raster().empty();
    }

    bool contains(const Vec& x, int dilate_cells = 0) const {
        if (is_intervals()) return intervals().contains(x(0));
        return dilate_cells > 0 ? raster().contains_point_dilated(x(0), x(1), dilate_cells)
                                : raster().contains_point(x(0), x(1));
    }

private:
    std::variant<IntervalSet, Raster> v_;
};

// interior surrogate: morphological erosion (raster) / endpoint shrink (1-D)
inline RegionApprox interior_approx(const RegionApprox& r, int erosion_cells = 1,
                                    double eps_1d = 1e-9) {
    if (r.is_intervals()) return RegionApprox(r.intervals().shrink(eps_1d));
    return RegionApprox(r.raster().eroded(erosion_cells));
}

namespace detail {

// resample both rasters onto the union grid at the finer resolution
inline std::pair<Raster, Raster> common_grid(const Raster& a, const Raster& b) {
    if (a.same_grid(b)) return {a, b};
    double res = std::max(a.res(), b.res());
    Box2 box = a.tight_bbox().unite(b.tight_bbox());
    if (!box.valid()) box = a.bbox().unite(b.bbox());
    auto resample = [&](const Raster& src) {
        Raster out(box.pad(src.cell()), res);
        src.for_each_occupied([&](std::size_t i, std::size_t j) {
            double x = src.cx(i), y = src.cy(j);
            // paint the source cell footprint when the target grid is finer
            int span = std::max(1, int(std::ceil(res / src.res())));
            double half = 0.5 / src.res();
            for (int sj = 0; sj < span; ++sj)
                for (int si = 0; si < span; ++si) {
                    double px = x - half + (si + 0.5) / res;
                    double py = y - half + (sj + 0.5) / res;
                    out.set_point(px, py);
                }
        });
        return out;
    };
    return {resample(a), resample(b)};
}

inline double hausdorff_raster(const Raster& ra, const Raster& rb) {
    auto [a, b] = common_grid(ra, rb);
    if (a.empty() || b.empty())
        return a.empty() == b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    auto da = distance_transform_sq(a);
    auto db = distance_transform_sq(b);
    double worst = 0.0;
    a.for_each_occupied(
        [&](std::size_t i, std::size_t j) { worst = std::max(worst, double(db[j * a.nx() + i])); });
    b.for_each_occupied(
        [&](std::size_t i, std::size_t j) { worst = std::max(worst, double(da[j * b.nx() + i])); });
    return std::sqrt(worst) / a.res();
}

inline Raster cloud_to_raster(const PointCloud& c, const Raster& like) {
    Raster out(like.bbox(), like.res());
    for (const auto& p : c.points) out.set_point(p(0), p(1));
    return out;
}

} // namespace detail

inline double hausdorff_distance(const RegionApprox& a, const RegionApprox& b) {
    if (a.dim() != b.dim()) throw dim_mismatch_error("hausdorff: dim mismatch");
    if (a.is_intervals()) return hausdorff_1d(a.intervals(), b.intervals());
    return detail::hausdorff_raster(a.raster(), b.raster());
}

inline double hausdorff_distance(const PointCloud& c, const RegionApprox& r) {
    if (r.is_intervals()) {
        IntervalSet pts;
        double w = 1e-12;
        std::vector<std::pair<double, double>> raw;
        raw.reserve(c.points.size());
        for (const auto& p : c.points) raw.emplace_back(p(0) - w, p(0) + w);
        return hausdorff_1d(IntervalSet::from_parts(std::move(raw)), r.intervals());
    }
    Box2 box = r.raster().tight_bbox();
    for (const auto& p : c.points)
        box = box.unite({p(0), p(1), p(0), p(1)});
    Raster base(box.pad(2.0 * r.raster().cell()), r.raster().res());
    Raster rr = base;
    r.raster().for_each_occupied([&](std::size_t i, std::size_t j) {
        rr.set_point(r.raster().cx(i), r.raster().cy(j));
    });
    Raster rc = detail::cloud_to_raster(c, base);
    return detail::hausdorff_raster(rr, rc);
}

inline double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
    if (a.dim != b.dim) throw dim_mismatch_error("hausdorff: dim mismatch");
    double worst = 0.0;
    auto directed = [&](const PointCloud& x, const PointCloud& y) {
        double w = 0.0;
        for (const auto& p : x.points) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : y.points) best = std::min(best, (p - q).norm());
            w = std::max(w, best);
        }
        return w;
    };
    worst = std::max(directed(a, b), directed(b, a));
    return worst;
}

} // namespace fractile
