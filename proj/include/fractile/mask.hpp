#pragma once

// Masked tilings for overlapping IFSs: mask construction (default and tops),
// the step recursion that conjugates the system by f_{theta_n}^-1 while
// intersecting tiles with mask regions, and the mask/state validity checks.
// The 1-D engine is templated on the endpoint scalar; exact rationals drop in
// when the map coefficients are rational.

#include "fractile/region.hpp"
#include "fractile/tiling.hpp"

namespace fractile {

struct Mask {
    std::vector<RegionApprox> regions;
};

namespace detail {

// image of a region under an invertible map, rasterized on a given grid by
// inverse membership: y in m(R)  <=>  m^-1(y) in R
inline Raster raster_image(const RegionApprox& src, const MapSpec& m, const Raster& grid) {
    Raster out(grid.bbox(), grid.res());
    MapSpec inv = m.inverse();
    Box2 img = src.raster().tight_bbox().image(m).pad(grid.cell());
    for (std::size_t j = 0; j < out.ny(); ++j) {
        double y = out.cy(j);
        if (y < img.y0 || y > img.y1) continue;
        for (std::size_t i = 0; i < out.nx(); ++i) {
            double x = out.cx(i);
            if (x < img.x0 || x > img.x1) continue;
            double sx, sy;
            try {
                inv.apply2(x, y, sx, sy);
            } catch (const numeric_error&) {
                continue;
            }
            if (src.raster().contains_point(sx, sy)) out.set(i, j);
        }
    }
    return out;
}

inline IntervalSet interval_image(const RegionApprox& src, const MapSpec& m) {
    if (!m.is_affine()) throw config_error("1-D mask machinery needs affine maps");
    return snap(src.intervals().map(m.linear()(0, 0), m.offset()(0)));
}

} // namespace detail

// f_i(A) as a region on A's own grid (1-D: exact)
inline RegionApprox map_image(const Ifs& F, int letter, const RegionApprox& A) {
    if (A.is_intervals()) return RegionApprox(detail::interval_image(A, F.map(letter)));
    return RegionApprox(detail::raster_image(A, F.map(letter), A.raster()));
}

struct MaskCheck {
    bool covering = true;
    bool non_overlapping = true;
    bool contained = true;
    std::string detail;
    bool ok() const { return covering && non_overlapping && contained; }
};

inline MaskCheck validate_mask(const Ifs& F, const RegionApprox& A, const Mask& M,
                               double eps_1d = 1e-9) {
    MaskCheck out;
    if (static_cast<int>(M.regions.size()) != F.size()) {
        out.covering = out.non_overlapping = out.contained = false;
        out.detail = "mask must have one region per map";
        return out;
    }
    if (A.is_intervals()) {
        IntervalSet uni;
        for (const auto& r : M.regions) uni = uni.unite(r.intervals());
        if (!A.intervals().subtract(uni).shrink(eps_1d).empty()) out.covering = false;
        for (int i = 0; i < F.size(); ++i)
            for (int j = i + 1; j < F.size(); ++j) {
                auto inter = M.regions[i].intervals().shrink(eps_1d).intersect(
                    M.regions[j].intervals().shrink(eps_1d));
                if (inter.measure() > eps_1d) out.non_overlapping = false;
            }
        for (int i = 0; i < F.size(); ++i) {
            auto img = detail::interval_image(A, F.map(i + 1));
            if (!img.contains_set(M.regions[i].intervals().shrink(eps_1d)))
                out.contained = false;
        }
        return out;
    }
    const Raster& ar = A.raster();
    Raster uni(ar.bbox(), ar.res());
    for (const auto& r : M.regions) uni |= r.raster();
    Raster gap = ar;
    gap.subtract(uni.dilated(1));
    if (!gap.empty()) out.covering = false;
    for (int i = 0; i < F.size(); ++i)
        for (int j = i + 1; j < F.size(); ++j) {
            Raster inter = M.regions[i].raster().eroded(1);
            inter &= M.regions[j].raster().eroded(1);
            if (!inter.empty()) out.non_overlapping = false;
        }
    for (int i = 0; i < F.size(); ++i) {
        Raster excess = M.regions[i].raster();
        excess.subtract(detail::raster_image(A, F.map(i + 1), ar).dilated(1));
        if (!excess.empty()) out.contained = false;
    }
    return out;
}

// default mask {f_i(A)}: valid exactly when the attractor is non-overlapping
inline Mask default_mask(const Ifs& F, const RegionApprox& A) {
    Mask M;
    for (int i = 1; i <= F.size(); ++i) M.regions.push_back(map_image(F, i, A));
    auto check = validate_mask(F, A, M);
    if (!check.non_overlapping)
        throw not_nonoverlapping_error("default mask: the images f_i(A) overlap");
    return M;
}

// tops mask: M_1 = f_1(A), M_{k+1} = f_{k+1}(A) minus the earlier regions
inline Mask tops_mask(const Ifs& F, const RegionApprox& A) {
    Mask M;
    if (A.is_intervals()) {
        IntervalSet used;
        for (int i = 1; i <= F.size(); ++i) {
            IntervalSet img = detail::interval_image(A, F.map(i));
            M.regions.push_back(RegionApprox(img.subtract(used)));
            used = used.unite(img);
        }
        return M;
    }
    Raster used(A.raster().bbox(), A.raster().res());
    for (int i = 1; i <= F.size(); ++i) {
        Raster img = detail::raster_image(A, F.map(i), A.raster());
        Raster region = img;
        region.subtract(used);
        used |= img;
        M.regions.push_back(RegionApprox(std::move(region)));
    }
    return M;
}

// ------------------------------------------------------------------
// 1-D masked recursion, templated on the endpoint scalar

template <class T>
struct Affine1D {
    T a, c;   // x -> a x + c
    Affine1D inverse() const { return {T(1) / a, -c / a}; }
    Affine1D compose(const Affine1D& rhs) const { return {a * rhs.a, a * rhs.c + c}; }
};

template <class T>
struct MaskedState1D {
    std::vector<Affine1D<T>> maps;
    IntervalSetT<T> attractor;
    std::vector<IntervalSetT<T>> mask;
    std::vector<IntervalSetT<T>> tiles;
    std::vector<std::vector<int>> trails;   // branch letters per tile
};

// Runs the full recursion; theta_letter(n) supplies the 1-based letter stream.
// The optional snapshot hook observes the state after every step (and once
// before the first).
template <class T, class Theta, class Snap = std::nullptr_t>
MaskedState1D<T> masked_tiling_1d(std::vector<Affine1D<T>> maps, IntervalSetT<T> A,
                                  std::vector<IntervalSetT<T>> mask, const Theta& theta_letter,
                                  int n_steps, Snap&& snapshot = nullptr) {
    const int N = static_cast<int>(maps.size());
    MaskedState1D<T> st{std::move(maps), std::move(A), std::move(mask), {}, {}};
    st.tiles.push_back(st.attractor);
    st.trails.push_back({});
    auto emit = [&] {
        if constexpr (!std::is_same_v<std::decay_t<Snap>, std::nullptr_t>) snapshot(st);
    };
    emit();
    for (int n = 1; n <= n_steps; ++n) {
        int th = theta_letter(n);
        Affine1D<T> fth = st.maps[th - 1];
        Affine1D<T> inv = fth.inverse();
        std::vector<IntervalSetT<T>> tiles_next;
        std::vector<std::vector<int>> trails_next;
        for (std::size_t t = 0; t < st.tiles.size(); ++t)
            for (int i = 0; i < N; ++i) {
                auto piece = st.tiles[t]
                                 .map(st.maps[i].a, st.maps[i].c)
                                 .intersect(st.mask[i])
                                 .map(inv.a, inv.c);
                if (piece.empty()) continue;
                tiles_next.push_back(std::move(piece));
                auto trail = st.trails[t];
                trail.push_back(i + 1);
                trails_next.push_back(std::move(trail));
            }
        std::vector<Affine1D<T>> maps_next;
        maps_next.reserve(N);
        for (int i = 0; i < N; ++i)
            maps_next.push_back(inv.compose(st.maps[i]).compose(fth));
        IntervalSetT<T> A_next = st.attractor.map(inv.a, inv.c);
        int th_next = theta_letter(n + 1);
        std::vector<IntervalSetT<T>> mask_next(N);
        const auto& fnext = maps_next[th_next - 1];
        mask_next[th_next - 1] = A_next.map(fnext.a, fnext.c);
        for (int j = 0; j < N; ++j)
            if (j != th_next - 1)
                mask_next[j] = st.mask[j].map(inv.a, inv.c).subtract(mask_next[th_next - 1]);
        st.maps = std::move(maps_next);
        st.attractor = std::move(A_next);
        st.mask = std::move(mask_next);
        st.tiles = std::move(tiles_next);
        st.trails = std::move(trails_next);
        emit();
    }
    return st;
}

// ------------------------------------------------------------------
// generic driver (double precision; rasters in 2-D)

struct MaskedTile {
    RegionApprox geometry;
    Word trail;
};

struct MaskedTilingResult {
    std::vector<MaskedTile> tiles;            // the final T_{n+1}
    std::vector<MapSpec> maps;                // F_{n+1}
    RegionApprox attractor;                   // A_{n+1}
    Mask mask;                                // M_{n+1}
    std::vector<RegionApprox> attractor_history;   // A_1 .. A_{n+1}
    std::vector<Mask> mask_history;
    std::vector<std::vector<MaskedTile>> tile_history;
    double worst_condition = 1.0;
    std::size_t dropped_slivers = 0;
};

namespace detail {

inline double condition_estimate(const MapSpec& m) {
    Eigen::JacobiSVD<Mat> svd(m.homogeneous());
    double lo = svd.singularValues()(svd.singularValues().size() - 1);
    double hi = svd.singularValues()(0);
    return lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
}

} // namespace detail

inline MaskedTilingResult masked_tiling(const Ifs& F, const RegionApprox& A, const Mask& M,
                                        const InfiniteWord& theta, int n_steps,
                                        bool allow_mask_rotation = false,
                                        std::size_t cell_budget = kDefaultCellBudget) {
    if (theta.alphabet() != F.size())
        throw invalid_word_error("masked_tiling: theta alphabet mismatch");
    auto vc = validate_mask(F, A, M);
    if (!vc.ok()) throw invalid_mask_error("masked_tiling: mask invariants fail");

    // the recursion requires M_{theta_1} = f_{theta_1}(A)
    Mask mask = M;
    int th1 = theta.letter(1);
    auto matches_full_image = [&](const Mask& mm) {
        auto img = map_image(F, th1, A);
        double tol = A.is_intervals() ? 1e-9 : 1.5 / A.raster().res();
        return hausdorff_distance(mm.regions[th1 - 1], img) <= tol;
    };
    if (!matches_full_image(mask)) {
        if (!allow_mask_rotation)
            throw invalid_mask_error(
                "masked_tiling: mask region theta_1 must equal f_{theta_1}(A); "
                "pass allow_mask_rotation to rebuild a tops mask in theta-first order");
        // rebuild tops-style with theta_1 claiming its full image first
        std::vector<int> order{th1};
        for (int i = 1; i <= F.size(); ++i)
            if (i != th1) order.push_back(i);
        Mask rotated;
        rotated.regions.resize(F.size());
        if (A.is_intervals()) {
            IntervalSet used;
            for (int idx : order) {
                IntervalSet img = detail::interval_image(A, F.map(idx));
                rotated.regions[idx - 1] = RegionApprox(img.subtract(used));
                used = used.unite(img);
            }
        } else {
            Raster used(A.raster().bbox(), A.raster().res());
            for (int idx : order) {
                Raster img = detail::raster_image(A, F.map(idx), A.raster());
                Raster region = img;
                region.subtract(used);
                used |= img;
                rotated.regions[idx - 1] = RegionApprox(std::move(region));
            }
        }
        mask = std::move(rotated);
    }

    MaskedTilingResult out;

    if (A.is_intervals()) {
        std::vector<Affine1D<double>> maps;
        for (const auto& m : F.maps()) maps.push_back({m.linear()(0, 0), m.offset()(0)});
        std::vector<IntervalSetT<double>> mask1;
        for (const auto& r : mask.regions) mask1.push_back(r.intervals());
        auto push_snapshot = [&](const MaskedState1D<double>& st) {
            out.attractor_history.push_back(RegionApprox(snap(st.attractor)));
            Mask msnap;
            for (const auto& r : st.mask) msnap.regions.push_back(RegionApprox(snap(r)));
            out.mask_history.push_back(std::move(msnap));
            std::vector<MaskedTile> tiles;
            for (std::size_t t = 0; t < st.tiles.size(); ++t) {
                Word trail;
                trail.alphabet = F.size();
                for (int c : st.trails[t]) trail.letters.push_back(uint8_t(c));
                tiles.push_back({RegionApprox(snap(st.tiles[t])), std::move(trail)});
            }
            out.tile_history.push_back(std::move(tiles));
        };
        auto st = masked_tiling_1d<double>(
            maps, A.intervals(), mask1,
            [&](int n) { return int(theta.letter(uint64_t(n))); }, n_steps, push_snapshot);
        out.tiles = out.tile_history.back();
        out.attractor = out.attractor_history.back();
        out.mask = out.mask_history.back();
        std::vector<MapSpec> fmaps;
        for (auto& m : st.maps) fmaps.push_back(MapSpec::affine1(m.a, m.c));
        out.maps = std::move(fmaps);
        return out;
    }

    // raster path
    double res = A.raster().res();
    std::vector<MapSpec> maps = F.maps();
    RegionApprox An = A;
    Mask Mn = mask;
    std::vector<MaskedTile> tiles{{A, Word::empty(F.size())}};
    out.attractor_history.push_back(An);
    out.mask_history.push_back(Mn);
    out.tile_history.push_back(tiles);

    for (int n = 1; n <= n_steps; ++n) {
        int th = theta.letter(n);
        const MapSpec& fth = maps[th - 1];
        MapSpec inv = fth.inverse();
        Box2 next_box = An.raster().tight_bbox().image(inv).pad(2.0 / res);
        Raster grid(next_box, res, cell_budget);

        // A_{n+1} = f_{n,th}^-1(A_n)
        Raster a_next(grid.bbox(), grid.res());
        for (std::size_t j = 0; j < a_next.ny(); ++j)
            for (std::size_t i = 0; i < a_next.nx(); ++i) {
                double zx, zy;
                fth.apply2(a_next.cx(i), a_next.cy(j), zx, zy);
                if (An.raster().contains_point(zx, zy)) a_next.set(i, j);
            }

        // tiles: f^-1(f_i(t) n M_i)
        std::vector<MaskedTile> tiles_next;
        for (const auto& tile : tiles) {
            Box2 tb = tile.geometry.raster().tight_bbox();
            if (!tb.valid()) continue;
            for (int i = 1; i <= F.size(); ++i) {
                const MapSpec& fi = maps[i - 1];
                MapSpec fi_inv = fi.inverse();
                Box2 mb = Mn.regions[i - 1].raster().tight_bbox();
                if (!mb.valid()) continue;
                Box2 piece_box = tb.image(fi).intersect(mb);
                if (!piece_box.valid()) continue;
                piece_box = piece_box.image(inv).pad(1.0 / res).intersect(grid.bbox());
                if (!piece_box.valid()) continue;
                Raster piece(piece_box, res, cell_budget);
                for (std::size_t j = 0; j < piece.ny(); ++j)
                    for (std::size_t i2 = 0; i2 < piece.nx(); ++i2) {
                        double zx, zy;
                        fth.apply2(piece.cx(i2), piece.cy(j), zx, zy);
                        if (!Mn.regions[i - 1].raster().contains_point(zx, zy)) continue;
                        double ux, uy;
                        fi_inv.apply2(zx, zy, ux, uy);
                        if (tile.geometry.raster().contains_point(ux, uy)) piece.set(i2, j);
                    }
                if (piece.empty()) {
                    ++out.dropped_slivers;
                    continue;
                }
                Word trail = tile.trail;
                trail.letters.push_back(uint8_t(i));
                tiles_next.push_back({RegionApprox(std::move(piece)), std::move(trail)});
            }
        }

        // conjugated system and mask update
        std::vector<MapSpec> maps_next;
        maps_next.reserve(maps.size());
        for (const auto& fi : maps) {
            MapSpec m = inv.compose(fi).compose(fth);
            out.worst_condition = std::max(out.worst_condition, detail::condition_estimate(m));
            maps_next.push_back(std::move(m));
        }
        int th_next = theta.letter(uint64_t(n) + 1);
        Mask mask_next;
        mask_next.regions.resize(F.size());
        RegionApprox a_next_region(a_next);
        mask_next.regions[th_next - 1] = RegionApprox(
            detail::raster_image(a_next_region, maps_next[th_next - 1], grid));
        for (int j = 1; j <= F.size(); ++j) {
            if (j == th_next) continue;
            Raster pulled(grid.bbox(), grid.res());
            for (std::size_t jj = 0; jj < pulled.ny(); ++jj)
                for (std::size_t ii = 0; ii < pulled.nx(); ++ii) {
                    double zx, zy;
                    fth.apply2(pulled.cx(ii), pulled.cy(jj), zx, zy);
                    if (Mn.regions[j - 1].raster().contains_point(zx, zy)) pulled.set(ii, jj);
                }
            pulled.subtract(mask_next.regions[th_next - 1].raster());
            mask_next.regions[j - 1] = RegionApprox(std::move(pulled));
        }

        maps = std::move(maps_next);
        An = std::move(a_next_region);
        Mn = std::move(mask_next);
        tiles = std::move(tiles_next);
        out.attractor_history.push_back(An);
        out.mask_history.push_back(Mn);
        out.tile_history.push_back(tiles);
    }

    out.tiles = tiles;
    out.maps = maps;
    out.attractor = An;
    out.mask = Mn;
    return out;
}

} // namespace fractile
