#pragma once

// Sections of the coordinate map, extended addresses theta|k . omega, the fast
// basin, and fractal transformations between systems sharing a word theta.
// Only mask-induced ("tops") sections are provided; region boundary ties break
// to the largest index.

#include "fractile/ifs.hpp"
#include "fractile/image.hpp"
#include "fractile/mask.hpp"

namespace fractile {

struct SectionSpec {
    Mask mask;
    int depth = 48;   // address truncation (double precision saturates well before)
};

inline SectionSpec tops_section(const Ifs& F, const RegionApprox& A, int depth = 48) {
    return SectionSpec{tops_mask(F, A), depth};
}

// address prefix . tail with the canonical constraint prefix_k != tail_1
struct OmegaAddress {
    Word prefix;   // theta|k (possibly empty)
    Word tail;     // finite truncation of omega

    std::string str() const { return prefix.str() + "." + tail.str(); }
};

namespace detail {

// index of the mask region containing x, ties to the largest index; -1 if none
inline int region_digit(const Mask& M, const Vec& x, int dilate) {
    for (int i = int(M.regions.size()); i >= 1; --i) {
        const auto& r = M.regions[i - 1];
        if (r.is_intervals()) {
            if (r.intervals().contains(x(0))) return i;
            if (dilate > 0 && !r.intervals().empty() && r.intervals().distance_to(x(0)) <= 1e-9)
                return i;
        } else if (dilate > 0 ? r.raster().contains_point_dilated(x(0), x(1), dilate)
                              : r.raster().contains_point(x(0), x(1))) {
            return i;
        }
    }
    return -1;
}

} // namespace detail

// Greedy digit extraction: digit i with x in M_i, then recurse on f_i^-1(x).
// Inverse steps expand raster noise, so the orbit is re-anchored on the
// attractor raster when it drifts off; the final pi o tau error stays at
// raster scale because the forward reconstruction contracts the same factors
// right back.
inline Word section_address(const Ifs& F, const RegionApprox& A, const SectionSpec& S,
                            const Vec& x) {
    if (!A.contains(x, 1))
        throw outside_attractor_error("section_address: point is not on the attractor");
    Word out;
    out.alphabet = F.size();
    Vec y = x;
    for (int d = 0; d < S.depth; ++d) {
        int digit = detail::region_digit(S.mask, y, 0);
        for (int dilate = 1; digit < 0 && dilate <= 3; ++dilate)
            digit = detail::region_digit(S.mask, y, dilate);
        if (digit < 0)
            throw outside_attractor_error("section_address: orbit left every mask region");
        out.letters.push_back(uint8_t(digit));
        y = F.inverse_map(digit).apply(y);
        if (A.is_raster() && !A.raster().contains_point(y(0), y(1))) {
            double sx, sy;
            if (A.raster().nearest_occupied(y(0), y(1), 3, sx, sy)) y = vec2(sx, sy);
        }
    }
    return out;
}

// pi-hat(prefix . tail) = (f^-1)_prefix (pi(tail))
inline Vec extended_coordinate(const Ifs& F, const OmegaAddress& addr, int depth = 48) {
    if (!F.declared_contractive())
        throw not_contractive_error("extended_coordinate: ifs not declared contractive");
    auto [c, r] = attractor_bound(F);
    Vec y = c;
    int d = std::min<int>(depth, int(addr.tail.size()));
    for (int i = d; i >= 1; --i) y = F.map(addr.tail.at(std::size_t(i))).apply(y);
    for (int i = int(addr.prefix.size()); i >= 1; --i)
        y = F.inverse_map(addr.prefix.at(std::size_t(i))).apply(y);
    return y;
}

// least k with f_{theta_k} o ... o f_{theta_1}(x) on the attractor, then the
// section address of that image; minimality makes the address canonical, and
// raster-tolerance collisions are stripped explicitly
inline OmegaAddress extended_section(const Ifs& F, const RegionApprox& A, const SectionSpec& S,
                                     const InfiniteWord& theta, const Vec& x, int k_max = 64) {
    std::vector<Vec> orbit{x};
    int k = -1;
    for (int j = 0; j <= k_max; ++j) {
        if (A.contains(orbit.back(), 1)) { k = j; break; }
        orbit.push_back(F.map(theta.letter(uint64_t(j) + 1)).apply(orbit.back()));
    }
    if (k < 0)
        throw outside_expansion_error(
            "extended_section: point not reached by level-" + std::to_string(k_max) +
            " expansion of the attractor");
    Word tail = section_address(F, A, S, orbit[std::size_t(k)]);
    while (k >= 1 && tail.letters[0] == theta.letter(uint64_t(k)) &&
           A.contains(orbit[std::size_t(k) - 1], 1)) {
        --k;
        tail = section_address(F, A, S, orbit[std::size_t(k)]);
    }
    OmegaAddress out;
    out.prefix = theta.prefix(std::size_t(k));
    out.tail = std::move(tail);
    return out;
}

// fast basin truncation: union over j <= k of (F*)^j(A)
inline RegionApprox fast_basin(const Ifs& F, const RegionApprox& A, int k) {
    if (!A.is_intervals()) throw dim_mismatch_error("use fast_basin with a window for rasters");
    IntervalSet acc = A.intervals();
    IntervalSet cur = A.intervals();
    for (int j = 0; j < k; ++j) {
        IntervalSet next;
        for (const auto& m : F.maps()) {
            MapSpec inv = m.inverse();
            next = next.unite(cur.map(inv.linear()(0, 0), inv.offset()(0)));
        }
        cur = snap(next);
        acc = snap(acc.unite(cur));
    }
    return RegionApprox(std::move(acc));
}

namespace detail {

inline double scale_upper_bound(const MapSpec& m) {
    if (!m.is_affine()) return std::numeric_limits<double>::infinity();
    // exact largest singular value of the 2x2 linear part
    const Mat& L = m.linear();
    double a = L(0, 0), b = L(0, 1), c = L(1, 0), d = L(1, 1);
    double t = a * a + b * b + c * c + d * d;
    double det = a * d - b * c;
    double disc = std::sqrt(std::max(0.0, t * t - 4 * det * det));
    return std::sqrt((t + disc) / 2);
}

// paint M(A) on the output window. While M still magnifies, subdivide by
// M(A) = union of M(f_i(A)): pieces are subsets, so window pruning is sound,
// and by unit scale the raster membership test is accurate to one cell.
inline void paint_scaled_copy(const Ifs& F, const Raster& A, const MapSpec& M, Raster& out,
                              std::size_t& nodes, std::size_t budget) {
    Box2 region = A.tight_bbox().image(M).pad(out.cell());
    if (!region.intersect(out.bbox()).valid()) return;
    if (++nodes > budget) throw budget_exceeded_error("fast basin: piece budget exceeded");
    // subdividing below half scale keeps the attractor-side quantization under
    // half an output cell
    if (scale_upper_bound(M) > 0.5 + 1e-9) {
        for (int i = 1; i <= F.size(); ++i)
            paint_scaled_copy(F, A, M.compose(F.map(i)), out, nodes, budget);
        return;
    }
    Box2 clip = region.intersect(out.bbox());
    MapSpec inv = M.inverse();
    for (std::size_t j = 0; j < out.ny(); ++j) {
        double y = out.cy(j);
        if (y < clip.y0 || y > clip.y1) continue;
        for (std::size_t i = 0; i < out.nx(); ++i) {
            double x = out.cx(i);
            if (x < clip.x0 || x > clip.x1 || out.get(i, j)) continue;
            double sx, sy;
            inv.apply2(x, y, sx, sy);
            if (A.contains_point(sx, sy)) out.set(i, j);
        }
    }
}

inline void fast_basin_dfs(const Ifs& F, const Raster& A, const MapSpec& inv_word, int depth,
                           Raster& out, std::size_t& nodes, std::size_t budget) {
    paint_scaled_copy(F, A, inv_word, out, nodes, budget);
    if (depth == 0) return;
    // extend the inverse word on the left: f^-1_{i w} = f_i^-1 o f^-1_w
    for (int i = 1; i <= F.size(); ++i)
        fast_basin_dfs(F, A, F.inverse_map(i).compose(inv_word), depth - 1, out, nodes, budget);
}

} // namespace detail

// Raster fast basin over a window: every inverse word w with |w| <= k paints
// its inflated copy f^-1_w(A) through forward subdivision, keeping the
// approximation within a cell of the truth at every depth.
inline RegionApprox fast_basin_window(const Ifs& F, const RegionApprox& A, int k,
                                      const Box2& window, double res,
                                      std::size_t cell_budget = kDefaultCellBudget,
                                      std::size_t word_budget = kDefaultTileBudget) {
    if (A.is_intervals()) {
        auto full = fast_basin(F, A, k).intervals();
        return RegionApprox(full.intersect(IntervalSet(window.x0, window.x1)));
    }
    Raster out(window, res, cell_budget);
    std::size_t nodes = 0;
    detail::fast_basin_dfs(F, A.raster(), MapSpec::identity(2), k, out, nodes, word_budget);
    return RegionApprox(std::move(out));
}

// systems paired through a shared theta
struct TransformSystem {
    Ifs F;
    RegionApprox A;
    SectionSpec S;
};

inline TransformSystem make_transform_system(const Ifs& F, const RegionApprox& A, int depth = 48) {
    return TransformSystem{F, A, tops_section(F, A, depth)};
}

// pi-hat_dst . tau-hat_src : B_src(theta) -> B_dst(theta)
inline Vec fractal_transform_point(const TransformSystem& src, const TransformSystem& dst,
                                   const InfiniteWord& theta, const Vec& x, int k_max = 64) {
    if (src.F.size() != dst.F.size())
        throw invalid_word_error("fractal transform: systems must have equally many maps");
    OmegaAddress addr = extended_section(src.F, src.A, src.S, theta, x, k_max);
    return extended_coordinate(dst.F, addr, dst.S.depth);
}

// Inverse-warp an image: for each output pixel y (over dst's space) evaluate
// the transform dst -> src and sample the input nearest-neighbor. Pixels whose
// address search fails get the sentinel color.
struct ImageWindow {
    Box2 box;   // world rectangle covered by the image
};

inline ImageRGB8 transform_image(const TransformSystem& src, const TransformSystem& dst,
                                 const InfiniteWord& theta, const ImageRGB8& input,
                                 const ImageWindow& in_win, const ImageWindow& out_win,
                                 int out_width, int out_height, int k_max = 64,
                                 Rgb sentinel = {255, 0, 255}) {
    ImageRGB8 out(out_width, out_height, sentinel);
    parallel_for(std::size_t(out_height), [&](std::size_t y0, std::size_t y1) {
        for (std::size_t py = y0; py < y1; ++py) {
            for (int px = 0; px < out_width; ++px) {
                double wx = out_win.box.x0 + (px + 0.5) / out_width * out_win.box.width();
                double wy = out_win.box.y1 - (py + 0.5) / out_height * out_win.box.height();
                Vec p;
                try {
                    // output lives over dst: section in dst, coordinate in src
                    OmegaAddress addr =
                        extended_section(dst.F, dst.A, dst.S, theta, vec2(wx, wy), k_max);
                    p = extended_coordinate(src.F, addr, src.S.depth);
                } catch (const error&) {
                    continue;
                }
                double u = (p(0) - in_win.box.x0) / in_win.box.width() * input.width;
                double v = (in_win.box.y1 - p(1)) / in_win.box.height() * input.height;
                int ix = int(std::floor(u)), iy = int(std::floor(v));
                if (ix < 0 || iy < 0 || ix >= input.width || iy >= input.height) continue;
                out.at(px, int(py)) = input.at(ix, iy);
            }
        }
    }, 8);
    return out;
}

} // namespace fractile
