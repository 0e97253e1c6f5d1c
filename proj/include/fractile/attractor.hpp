#pragma once

// Attractor approximation: the deterministic Hutchinson iteration (raster or
// exact 1-D intervals) and the chaos game.

#include "fractile/ifs.hpp"
#include "fractile/region.hpp"

namespace fractile {

namespace detail {

// Grow a box until it absorbs all its images; contraction makes this converge.
inline Box2 invariant_box(const Ifs& F, Box2 seed) {
    Box2 box = seed;
    for (int pass = 0; pass < 256; ++pass) {
        Box2 next = box;
        for (const auto& m : F.maps()) next = next.unite(box.image(m));
        bool grew = next.x0 < box.x0 - 1e-12 || next.y0 < box.y0 - 1e-12 ||
                    next.x1 > box.x1 + 1e-12 || next.y1 > box.y1 + 1e-12;
        box = next;
        if (!grew) return box;
    }
    throw not_contractive_error("invariant box iteration did not stabilize");
}

inline IntervalSet interval_hutchinson(const Ifs& F, const IntervalSet& s) {
    IntervalSet out;
    for (const auto& m : F.maps()) {
        if (!m.is_affine()) throw config_error("1-D attractor needs affine maps");
        out = out.unite(s.map(m.linear()(0, 0), m.offset()(0)));
    }
    return snap(out);
}

} // namespace detail

// F^iters(seed) rasterized; for dim 1 the computation is exact on intervals.
// The bbox is grown to an invariant box before rasterizing so no mass leaves
// the grid.
inline RegionApprox deterministic_attractor(const Ifs& F, const RegionApprox& seed, int iters,
                                            double res,
                                            std::size_t cell_budget = kDefaultCellBudget) {
    if (!F.declared_contractive())
        throw not_contractive_error("deterministic_attractor: ifs not declared contractive");
    if (iters < 1) throw config_error("deterministic_attractor: iters must be >= 1");

    if (F.dim() == 1) {
        IntervalSet s = seed.is_intervals()
                            ? seed.intervals()
                            : throw dim_mismatch_error("1-D attractor needs interval seed");
        for (int k = 0; k < iters; ++k) {
            IntervalSet next = detail::interval_hutchinson(F, s);
            if (hausdorff_1d(next, s) < 1e-13) { s = std::move(next); break; }
            s = std::move(next);
        }
        return RegionApprox(std::move(s));
    }

    if (F.dim() != 2) throw dim_mismatch_error("raster attractor supports dim 2");
    const Raster& sr = seed.raster();
    Box2 box = detail::invariant_box(F, sr.tight_bbox().valid() ? sr.tight_bbox() : sr.bbox());
    Raster cur(box.pad(1.0 / res), res, cell_budget);
    sr.for_each_occupied(
        [&](std::size_t i, std::size_t j) { cur.set_point(sr.cx(i), sr.cy(j)); });

    for (int k = 0; k < iters; ++k) {
        Raster next(cur.bbox(), res, cell_budget);
        // forward map cell centers: with contractive maps image points of
        // adjacent cells stay within a cell of each other, so no holes open up
        for (const auto& m : F.maps()) {
            cur.for_each_occupied([&](std::size_t i, std::size_t j) {
                double ox, oy;
                m.apply2(cur.cx(i), cur.cy(j), ox, oy);
                next.set_point(ox, oy);
            });
        }
        bool stable = k > 0 && detail::hausdorff_raster(next, cur) <= cur.cell() * 1.0001;
        cur = std::move(next);
        if (stable) break;
    }
    return RegionApprox(std::move(cur));
}

namespace detail {

// x in F^k(B)  <=>  some f_i^-1(x) lies in F^{k-1}(B); since F(B) subset B,
// every intermediate point of a witness word stays inside B, which prunes the
// search hard. Early exit on the first witness.
inline bool in_hutchinson_iterate(const Ifs& F, double x, double y, int k, const Box2& box,
                                  double margin) {
    if (x < box.x0 - margin || x > box.x1 + margin || y < box.y0 - margin || y > box.y1 + margin)
        return false;
    if (k == 0) return true;
    for (int i = 1; i <= F.size(); ++i) {
        double ix, iy;
        try {
            F.inverse_map(i).apply2(x, y, ix, iy);
        } catch (const numeric_error&) {
            continue;
        }
        if (in_hutchinson_iterate(F, ix, iy, k - 1, box, margin)) return true;
    }
    return false;
}

} // namespace detail

// Tight raster of the attractor: cell centers tested against F^k(B) for an
// invariant box B and k deep enough that lambda^k diam(B) < one cell. The
// result over-approximates A by at most one cell and accumulates no drift.
inline RegionApprox attractor_raster(const Ifs& F, double res,
                                     std::size_t cell_budget = kDefaultCellBudget) {
    if (!F.declared_contractive())
        throw not_contractive_error("attractor_raster: ifs not declared contractive");
    if (F.dim() == 1) {
        auto [c, r] = attractor_bound(F);
        IntervalSet s(c(0) - r, c(0) + r);
        return deterministic_attractor(F, RegionApprox(std::move(s)), 200, res, cell_budget);
    }
    if (F.dim() != 2) throw dim_mismatch_error("attractor_raster supports dim 1 and 2");
    Box2 box = detail::invariant_box(F, Box2{-0.5, -0.5, 0.5, 0.5});
    double lambda = std::min(0.97, estimate_contraction(F));
    double diam = std::hypot(box.width(), box.height());
    int depth = std::max(1, int(std::ceil(std::log(diam * res) / -std::log(lambda))));
    Raster out(box.pad(1.0 / res), res, cell_budget);
    const double margin = out.cell();
    std::vector<uint8_t> hits(out.nx() * out.ny(), 0);   // bytes: safe to fill in parallel
    parallel_for(out.ny(), [&](std::size_t j0, std::size_t j1) {
        for (std::size_t j = j0; j < j1; ++j)
            for (std::size_t i = 0; i < out.nx(); ++i)
                if (detail::in_hutchinson_iterate(F, out.cx(i), out.cy(j), depth, box, margin))
                    hits[j * out.nx() + i] = 1;
    }, 64);
    for (std::size_t j = 0; j < out.ny(); ++j)
        for (std::size_t i = 0; i < out.nx(); ++i)
            if (hits[j * out.nx() + i]) out.set(i, j);
    return RegionApprox(std::move(out));
}

// n points of a seeded random orbit after a 100-step burn-in.
inline PointCloud chaos_game(const Ifs& F, std::size_t n, uint64_t seed) {
    if (!F.declared_contractive())
        throw not_contractive_error("chaos_game: ifs not declared contractive");
    if (n < 1) throw config_error("chaos_game: n must be >= 1");
    SplitMix64 rng(seed);
    auto [c, r] = attractor_bound(F);
    Vec x = c;
    const int burn_in = 100;
    for (int k = 0; k < burn_in; ++k)
        x = F.map(int(rng.next() % F.size()) + 1).apply(x);
    PointCloud cloud;
    cloud.dim = F.dim();
    cloud.seed = seed;
    cloud.points.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        x = F.map(int(rng.next() % F.size()) + 1).apply(x);
        cloud.points.push_back(x);
    }
    return cloud;
}

} // namespace fractile
