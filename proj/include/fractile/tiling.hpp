#pragma once

// The word-indexed tiling: tiles t_{theta,omega} = (f^-1)_{theta|k} o f_omega (A),
// canonical tile identity (strip leading letters equal to theta at the level),
// the nested level sets, and the non-overlap / coverage verifiers.

#include <map>
#include <optional>
#include <string>

#include "fractile/attractor.hpp"

namespace fractile {

struct TileKey {
    int level = 0;
    Word word;

    bool operator==(const TileKey& rhs) const {
        return level == rhs.level && word == rhs.word;
    }
    bool operator<(const TileKey& rhs) const {
        if (level != rhs.level) return level < rhs.level;
        return word.letters < rhs.word.letters;
    }
    std::string str() const {
        return std::to_string(level) + ":" + (word.empty_word() ? "-" : word.str());
    }
};

struct Tile {
    TileKey key;
    MapSpec xform;
};

// strips leading letters while word_1 == theta_level; the transform is
// unchanged by the identity (f^-1)_{theta|k} o f_w = (f^-1)_{theta|k+1} o f_{theta_{k+1} w}
inline TileKey canonicalize(const InfiniteWord& theta, int level, Word word) {
    if (static_cast<int>(word.size()) != level)
        throw invalid_word_error("canonicalize: |word| must equal level");
    int k = level;
    std::size_t skip = 0;
    while (k >= 1 && word.letters[skip] == theta.letter(k)) {
        ++skip;
        --k;
    }
    Word out;
    out.alphabet = word.alphabet;
    out.letters.assign(word.letters.begin() + skip, word.letters.end());
    return TileKey{k, std::move(out)};
}

class Tiling {
public:
    Tiling(Ifs F, RegionApprox A, InfiniteWord theta, int max_level,
           std::size_t budget = kDefaultTileBudget)
        : F_(std::move(F)), A_(std::move(A)), theta_(std::move(theta)), max_level_(max_level) {
        if (max_level < 0) throw config_error("tiling: level must be >= 0");
        if (theta_.alphabet() != F_.size())
            throw invalid_word_error("tiling: theta alphabet must match the ifs");
        build(budget);
    }

    const Ifs& ifs() const { return F_; }
    const RegionApprox& attractor() const { return A_; }
    const InfiniteWord& theta() const { return theta_; }
    int max_level() const { return max_level_; }
    const std::vector<Tile>& tiles() const { return tiles_; }

    std::vector<TileKey> keys() const {
        std::vector<TileKey> out;
        out.reserve(tiles_.size());
        for (const auto& t : tiles_) out.push_back(t.key);
        return out;
    }

    // geometry of one tile at the resolution of the stored attractor raster
    RegionApprox geometry(const Tile& t) const { return tile_geometry(A_, t.xform); }

    // the union of all level-k tiles: B_k = (f^-1)_{theta|k}(A)
    MapSpec level_expansion(int k) const {
        return inverse_compose(F_, theta_.prefix(std::size_t(k)));
    }

    static RegionApprox tile_geometry(const RegionApprox& A, const MapSpec& xform,
                                      double res_override = 0.0,
                                      std::size_t cell_budget = kDefaultCellBudget) {
        if (A.is_intervals()) {
            if (!xform.is_affine()) throw config_error("1-D tile geometry needs affine maps");
            return RegionApprox(
                snap(A.intervals().map(xform.linear()(0, 0), xform.offset()(0))));
        }
        const Raster& ar = A.raster();
        double res = res_override > 0 ? res_override : ar.res();
        Box2 src = ar.tight_bbox();
        Box2 dst = src.image(xform);
        Raster out(dst.pad(1.0 / res), res, cell_budget);
        MapSpec inv = xform.inverse();
        for (std::size_t j = 0; j < out.ny(); ++j)
            for (std::size_t i = 0; i < out.nx(); ++i) {
                double sx, sy;
                try {
                    inv.apply2(out.cx(i), out.cy(j), sx, sy);
                } catch (const numeric_error&) {
                    continue;
                }
                if (ar.contains_point(sx, sy)) out.set(i, j);
            }
        return RegionApprox(std::move(out));
    }

private:
    // depth-first enumeration of canonical keys: level 0 plus, for each
    // 1 <= j <= max_level, the words of length j with w_1 != theta_j
    void build(std::size_t budget) {
        tiles_.push_back({TileKey{0, Word::empty(F_.size())}, MapSpec::identity(F_.dim())});
        MapSpec prefix_inverse = MapSpec::identity(F_.dim());
        for (int j = 1; j <= max_level_; ++j) {
            prefix_inverse = prefix_inverse.compose(F_.inverse_map(theta_.letter(j)));
            int forbidden = theta_.letter(j);
            Word w;
            w.alphabet = F_.size();
            for (int a = 1; a <= F_.size(); ++a) {
                if (a == forbidden) continue;
                w.letters.assign(1, uint8_t(a));
                dfs(w, prefix_inverse.compose(F_.map(a)), j, budget);
            }
        }
    }

    void dfs(Word& w, MapSpec cur, int target_len, std::size_t budget) {
        if (static_cast<int>(w.size()) == target_len) {
            if (tiles_.size() >= budget)
                throw budget_exceeded_error("tiling: tile budget exceeded at level " +
                                            std::to_string(target_len));
            tiles_.push_back({TileKey{target_len, w}, cur});
            return;
        }
        for (int a = 1; a <= F_.size(); ++a) {
            w.letters.push_back(uint8_t(a));
            dfs(w, cur.compose(F_.map(a)), target_len, budget);
            w.letters.pop_back();
        }
    }

    Ifs F_;
    RegionApprox A_;
    InfiniteWord theta_;
    int max_level_;
    std::vector<Tile> tiles_;
};

struct NonOverlapReport {
    bool ok = true;
    std::size_t pairs_checked = 0;
    std::size_t overlapping_pairs = 0;
    std::size_t worst_overlap_cells = 0;   // raster path
    double worst_overlap_measure = 0.0;    // 1-D path
    TileKey worst_a, worst_b;

    std::string str() const {
        if (ok) return "non-overlap: ok (" + std::to_string(pairs_checked) + " pairs checked)";
        return "non-overlap: FAILED, worst pair " + worst_a.str() + " / " + worst_b.str() +
               " overlap cells " + std::to_string(worst_overlap_cells) + " measure " +
               std::to_string(worst_overlap_measure);
    }
};

// geometry reference for the pairwise scan: a transform applied to a shared
// attractor raster (flat tilings share one, graph tilings one per component)
struct GeomRef {
    const Raster* attractor;
    MapSpec xform;
    TileKey key;
};

namespace detail {

// pairwise interior-overlap scan over raster geometries sharing one grid;
// rasters are built padded so erosion at the clip edge cannot hide overlap
inline void check_pair_raster(const GeomRef& ta, const GeomRef& tb, const Box2& inter, double res,
                              int erosion, NonOverlapReport& rep) {
    Box2 grid_box = inter.pad((erosion + 1) / res);
    auto rasterize = [&](const GeomRef& g) {
        Raster out(grid_box, res);
        MapSpec inv = g.xform.inverse();
        for (std::size_t j = 0; j < out.ny(); ++j)
            for (std::size_t i = 0; i < out.nx(); ++i) {
                double sx, sy;
                try {
                    inv.apply2(out.cx(i), out.cy(j), sx, sy);
                } catch (const numeric_error&) {
                    continue;
                }
                if (g.attractor->contains_point(sx, sy)) out.set(i, j);
            }
        return out.eroded(erosion);
    };
    Raster ra = rasterize(ta);
    Raster rb = rasterize(tb);
    ra &= rb;
    std::size_t cells = ra.popcount();
    ++rep.pairs_checked;
    if (cells > 0) {
        rep.ok = false;
        ++rep.overlapping_pairs;
        if (cells > rep.worst_overlap_cells) {
            rep.worst_overlap_cells = cells;
            rep.worst_a = ta.key;
            rep.worst_b = tb.key;
        }
    }
}

} // namespace detail

// x-sweep over bounding boxes, then the per-pair raster check
inline NonOverlapReport verify_nonoverlap_items(const std::vector<GeomRef>& items, double res,
                                                int erosion_cells) {
    NonOverlapReport rep;
    std::vector<Box2> boxes(items.size());
    for (std::size_t t = 0; t < items.size(); ++t)
        boxes[t] = items[t].attractor->tight_bbox().image(items[t].xform);
    std::vector<std::size_t> order(items.size());
    for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return boxes[a].x0 < boxes[b].x0; });
    double pad = (erosion_cells + 1) / res;
    for (std::size_t ia = 0; ia < order.size(); ++ia) {
        std::size_t a = order[ia];
        for (std::size_t ib = ia + 1; ib < order.size(); ++ib) {
            std::size_t b = order[ib];
            if (boxes[b].x0 > boxes[a].x1 + pad) break;
            Box2 inter = boxes[a].pad(pad / 2).intersect(boxes[b].pad(pad / 2));
            if (!inter.valid()) continue;
            detail::check_pair_raster(items[a], items[b], inter, res, erosion_cells, rep);
        }
    }
    return rep;
}

inline NonOverlapReport verify_nonoverlap(const Tiling& T, int erosion_cells = 1) {
    NonOverlapReport rep;
    const auto& tiles = T.tiles();

    if (T.attractor().is_intervals()) {
        const double eps = 1e-9;
        std::vector<std::pair<IntervalSet, std::size_t>> geo;
        geo.reserve(tiles.size());
        for (std::size_t t = 0; t < tiles.size(); ++t)
            geo.emplace_back(T.geometry(tiles[t]).intervals().shrink(eps), t);
        for (std::size_t a = 0; a < geo.size(); ++a)
            for (std::size_t b = a + 1; b < geo.size(); ++b) {
                if (geo[a].first.empty() || geo[b].first.empty()) continue;
                if (geo[a].first.hi() < geo[b].first.lo() ||
                    geo[b].first.hi() < geo[a].first.lo())
                    continue;
                ++rep.pairs_checked;
                double m = geo[a].first.intersect(geo[b].first).measure();
                if (m > eps) {
                    rep.ok = false;
                    ++rep.overlapping_pairs;
                    if (m > rep.worst_overlap_measure) {
                        rep.worst_overlap_measure = m;
                        rep.worst_a = tiles[geo[a].second].key;
                        rep.worst_b = tiles[geo[b].second].key;
                    }
                }
            }
        return rep;
    }

    double res = T.attractor().raster().res();
    std::vector<GeomRef> items;
    items.reserve(tiles.size());
    for (const auto& t : tiles) items.push_back({&T.attractor().raster(), t.xform, t.key});
    return verify_nonoverlap_items(items, res, erosion_cells);
}

// Fraction of window cells covered by the union of tiles; the level-k union
// equals (f^-1)_{theta|k}(A), so membership is one map evaluation per cell.
inline double coverage_check(const Tiling& T, double x0, double y0, double x1, double y1,
                             int membership_dilation = 1) {
    const Word rev = T.theta().prefix(std::size_t(T.max_level())).reversed();
    if (T.attractor().is_intervals()) {
        MapSpec exp = T.level_expansion(T.max_level());
        IntervalSet bk =
            T.attractor().intervals().map(exp.linear()(0, 0), exp.offset()(0));
        IntervalSet window(x0, x1);
        double covered = bk.intersect(window).measure();
        return covered / window.measure();
    }
    const Raster& ar = T.attractor().raster();
    double res = ar.res();
    Raster win({x0, y0, x1, y1}, res);
    std::size_t covered = 0, total = win.nx() * win.ny();
    const MapSpec fwd = compose(T.ifs(), rev);   // inverse of the level expansion
    std::vector<std::size_t> counts(win.ny(), 0);
    parallel_for(win.ny(), [&](std::size_t j0, std::size_t j1) {
        for (std::size_t j = j0; j < j1; ++j) {
            std::size_t c = 0;
            for (std::size_t i = 0; i < win.nx(); ++i) {
                double px, py;
                fwd.apply2(win.cx(i), win.cy(j), px, py);
                if (membership_dilation > 0
                        ? ar.contains_point_dilated(px, py, membership_dilation)
                        : ar.contains_point(px, py))
                    ++c;
            }
            counts[j] = c;
        }
    }, 16);
    for (auto c : counts) covered += c;
    return double(covered) / double(total);
}

inline double coverage_check_1d(const Tiling& T, double x0, double x1) {
    return coverage_check(T, x0, 0, x1, 1);
}

} // namespace fractile
