#pragma once

// Graph-directed IFS: maps label the edges of a strongly connected digraph,
// the attractor is one compact set per vertex, and tilings run along reversed
// edge paths. An edge e: i -> j carries a map sending component j into
// component i, so F_i(X) = union of f_e(X_j) over edges leaving i.

#include "fractile/attractor.hpp"
#include "fractile/tiling.hpp"

namespace fractile {

struct GifsEdge {
    int from = 0, to = 0;   // 1-based vertices
    MapSpec map;
};

class Gifs {
public:
    Gifs(int vertices, std::vector<GifsEdge> edges, int dim = 2)
        : vertices_(vertices), edges_(std::move(edges)), dim_(dim) {
        if (vertices_ < 1) throw graph_error("gifs: needs at least one vertex");
        if (edges_.empty()) throw graph_error("gifs: needs at least one edge");
        for (const auto& e : edges_) {
            if (e.from < 1 || e.from > vertices_ || e.to < 1 || e.to > vertices_)
                throw graph_error("gifs: edge endpoint out of range");
            if (e.map.dim() != dim_) throw dim_mismatch_error("gifs: edge map dim mismatch");
        }
        if (!strongly_connected()) throw graph_error("gifs: graph is not strongly connected");
        inverses_.reserve(edges_.size());
        for (const auto& e : edges_) inverses_.push_back(e.map.inverse());
    }

    int vertices() const { return vertices_; }
    int dim() const { return dim_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const GifsEdge& edge(int id) const {   // 1-based
        if (id < 1 || id > edge_count()) throw graph_error("gifs: edge id out of range");
        return edges_[id - 1];
    }
    const MapSpec& edge_inverse(int id) const { return inverses_[id - 1]; }

    double contraction_estimate() const {
        double worst = 0.0;
        for (const auto& e : edges_) worst = std::max(worst, e.map.lipschitz_estimate());
        return worst;
    }

    // entry [i][j] counts the edges from i to j
    std::vector<std::vector<long long>> edge_count_matrix() const {
        std::vector<std::vector<long long>> m(vertices_,
                                              std::vector<long long>(vertices_, 0));
        for (const auto& e : edges_) ++m[e.from - 1][e.to - 1];
        return m;
    }

    // theta lives in the reversed graph: edge e runs to(e) -> from(e), so a
    // path needs to(e_{k+1}) == from(e_k)
    void validate_reversed_path(const std::vector<int>& edges) const {
        if (edges.empty()) throw graph_error("gifs: empty theta path");
        for (int id : edges) edge(id);
        for (std::size_t k = 0; k + 1 < edges.size(); ++k)
            if (edge(edges[k + 1]).to != edge(edges[k]).from)
                throw graph_error("gifs: theta is not a path in the reversed graph at step " +
                                  std::to_string(k + 1));
    }

    void validate_forward_path(const std::vector<int>& edges) const {
        for (int id : edges) edge(id);
        for (std::size_t k = 0; k + 1 < edges.size(); ++k)
            if (edge(edges[k + 1]).from != edge(edges[k]).to)
                throw graph_error("gifs: omega is not a forward path at step " +
                                  std::to_string(k + 1));
    }

private:
    bool strongly_connected() const {
        auto reach = [&](bool forward) {
            std::vector<char> seen(vertices_ + 1, 0);
            std::vector<int> stack{1};
            seen[1] = 1;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (const auto& e : edges_) {
                    int a = forward ? e.from : e.to;
                    int b = forward ? e.to : e.from;
                    if (a == v && !seen[b]) {
                        seen[b] = 1;
                        stack.push_back(b);
                    }
                }
            }
            for (int v = 1; v <= vertices_; ++v)
                if (!seen[v]) return false;
            return true;
        };
        return reach(true) && reach(false);
    }

    int vertices_;
    std::vector<GifsEdge> edges_;
    int dim_;
    std::vector<MapSpec> inverses_;
};

namespace detail {

// per-component invariant boxes: grow all simultaneously until stable
inline std::vector<Box2> gifs_invariant_boxes(const Gifs& G) {
    std::vector<Box2> boxes(G.vertices(), Box2{-0.5, -0.5, 0.5, 0.5});
    for (int pass = 0; pass < 512; ++pass) {
        bool grew = false;
        std::vector<Box2> next = boxes;
        for (int id = 1; id <= G.edge_count(); ++id) {
            const auto& e = G.edge(id);
            Box2 img = boxes[e.to - 1].image(e.map);
            Box2 uni = next[e.from - 1].unite(img);
            if (uni.x0 < next[e.from - 1].x0 - 1e-12 || uni.y0 < next[e.from - 1].y0 - 1e-12 ||
                uni.x1 > next[e.from - 1].x1 + 1e-12 || uni.y1 > next[e.from - 1].y1 + 1e-12)
                grew = true;
            next[e.from - 1] = uni;
        }
        boxes = std::move(next);
        if (!grew) return boxes;
    }
    throw not_contractive_error("gifs: invariant boxes did not stabilize");
}

// x in F_v^(k)(boxes)  <=>  some edge leaving v pulls x into the next component
inline bool gifs_member(const Gifs& G, double x, double y, int v, int k,
                        const std::vector<Box2>& boxes, double margin) {
    const Box2& b = boxes[v - 1];
    if (x < b.x0 - margin || x > b.x1 + margin || y < b.y0 - margin || y > b.y1 + margin)
        return false;
    if (k == 0) return true;
    for (int id = 1; id <= G.edge_count(); ++id) {
        const auto& e = G.edge(id);
        if (e.from != v) continue;
        double ix, iy;
        try {
            G.edge_inverse(id).apply2(x, y, ix, iy);
        } catch (const numeric_error&) {
            continue;
        }
        if (gifs_member(G, ix, iy, e.to, k - 1, boxes, margin)) return true;
    }
    return false;
}

} // namespace detail

// raster approximation of every component of the attractor vector
inline std::vector<RegionApprox> gifs_attractor(const Gifs& G, double res,
                                                std::size_t cell_budget = kDefaultCellBudget) {
    double lambda = G.contraction_estimate();
    if (lambda >= 1.0)
        throw not_contractive_error("gifs_attractor: edges are not certified contractions");
    auto boxes = detail::gifs_invariant_boxes(G);
    double diam = 0;
    for (const auto& b : boxes) diam = std::max(diam, std::hypot(b.width(), b.height()));
    int depth = std::max(1, int(std::ceil(std::log(diam * res) / -std::log(lambda))));
    std::vector<RegionApprox> out;
    for (int v = 1; v <= G.vertices(); ++v) {
        Raster r(boxes[v - 1].pad(1.0 / res), res, cell_budget);
        const double margin = r.cell();
        std::vector<uint8_t> hits(r.nx() * r.ny(), 0);
        parallel_for(r.ny(), [&](std::size_t j0, std::size_t j1) {
            for (std::size_t j = j0; j < j1; ++j)
                for (std::size_t i = 0; i < r.nx(); ++i)
                    if (detail::gifs_member(G, r.cx(i), r.cy(j), v, depth, boxes, margin))
                        hits[j * r.nx() + i] = 1;
        }, 64);
        for (std::size_t j = 0; j < r.ny(); ++j)
            for (std::size_t i = 0; i < r.nx(); ++i)
                if (hits[j * r.nx() + i]) r.set(i, j);
        out.push_back(RegionApprox(std::move(r)));
    }
    return out;
}

struct GifsTile {
    TileKey key;            // level + edge word (canonical)
    MapSpec xform;
    int component = 0;      // terminal vertex of the path: which attractor part
};

// W_k enumeration: forward paths of length `level` starting at the vertex
// where theta|level terminates, canonicalized against theta
class GifsTiling {
public:
    GifsTiling(const Gifs& G, std::vector<RegionApprox> components, std::vector<int> theta,
               int max_level, std::size_t budget = kDefaultTileBudget)
        : G_(G), components_(std::move(components)), theta_(std::move(theta)),
          max_level_(max_level) {
        if (static_cast<int>(theta_.size()) < std::max(1, max_level))
            throw graph_error("gifs tiling: theta path shorter than the level");
        G_.validate_reversed_path(theta_);
        if (static_cast<int>(components_.size()) != G_.vertices())
            throw graph_error("gifs tiling: needs one attractor region per vertex");
        build(budget);
    }

    const std::vector<GifsTile>& tiles() const { return tiles_; }
    const Gifs& gifs() const { return G_; }
    const RegionApprox& component(int v) const { return components_[v - 1]; }
    int max_level() const { return max_level_; }

    RegionApprox geometry(const GifsTile& t) const {
        return Tiling::tile_geometry(components_[t.component - 1], t.xform);
    }

    std::vector<TileKey> keys() const {
        std::vector<TileKey> out;
        out.reserve(tiles_.size());
        for (const auto& t : tiles_) out.push_back(t.key);
        return out;
    }

private:
    void build(std::size_t budget) {
        int alphabet = G_.edge_count();
        // level 0: the component at theta's start vertex in the reversed graph
        int v0 = G_.edge(theta_[0]).to;
        tiles_.push_back({TileKey{0, Word::empty(alphabet)}, MapSpec::identity(G_.dim()), v0});
        MapSpec prefix_inverse = MapSpec::identity(G_.dim());
        for (int j = 1; j <= max_level_; ++j) {
            int ej = theta_[j - 1];
            prefix_inverse = prefix_inverse.compose(G_.edge_inverse(ej));
            int start_vertex = G_.edge(ej).from;
            // canonical skip: omit paths whose first edge equals theta_j
            Word w;
            w.alphabet = alphabet;
            for (int id = 1; id <= G_.edge_count(); ++id) {
                if (id == ej) continue;
                if (G_.edge(id).from != start_vertex) continue;
                w.letters.assign(1, uint8_t(id));
                dfs(w, prefix_inverse.compose(G_.edge(id).map), G_.edge(id).to, j, budget);
            }
        }
    }

    void dfs(Word& w, MapSpec cur, int vertex, int target_len, std::size_t budget) {
        if (static_cast<int>(w.size()) == target_len) {
            if (tiles_.size() >= budget)
                throw budget_exceeded_error("gifs tiling: tile budget exceeded");
            tiles_.push_back({TileKey{target_len, w}, cur, vertex});
            return;
        }
        for (int id = 1; id <= G_.edge_count(); ++id) {
            if (G_.edge(id).from != vertex) continue;
            w.letters.push_back(uint8_t(id));
            dfs(w, cur.compose(G_.edge(id).map), G_.edge(id).to, target_len, budget);
            w.letters.pop_back();
        }
    }

    Gifs G_;
    std::vector<RegionApprox> components_;
    std::vector<int> theta_;
    int max_level_;
    std::vector<GifsTile> tiles_;
};

inline NonOverlapReport gifs_verify_nonoverlap(const GifsTiling& T, int erosion_cells = 1) {
    std::vector<GeomRef> items;
    double res = 0;
    for (const auto& t : T.tiles()) {
        const Raster& ar = T.component(t.component).raster();
        res = ar.res();
        items.push_back({&ar, t.xform, t.key});
    }
    return verify_nonoverlap_items(items, res, erosion_cells);
}

// number of forward paths of length k from each vertex, by matrix powering
inline std::vector<long long> gifs_path_counts(const Gifs& G, int k) {
    int n = G.vertices();
    auto M = G.edge_count_matrix();
    std::vector<std::vector<long long>> P(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i) P[i][i] = 1;
    for (int step = 0; step < k; ++step) {
        std::vector<std::vector<long long>> Q(n, std::vector<long long>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) Q[i][j] += P[i][l] * M[l][j];
        P = std::move(Q);
    }
    std::vector<long long> out(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i] += P[i][j];
    return out;
}

// ------------------------------------------------------------------
// presets

struct GifsPreset {
    Gifs gifs;
    std::vector<std::vector<Vec>> polygons;   // one polygon template per vertex
};

// Penrose triangle pair: acute golden triangle A = (P,Q,R) containing the
// gnomon B = (P,Q,S). Derived from the dissections A = B u f3(A) and
// B = f1(B) u f2(A); every map is a similarity of ratio 1/tau (f2 reflects
// across the symmetry axis and keeps its fixed point at z = tau).
inline GifsPreset penrose_preset() {
    const double tau = (1.0 + std::sqrt(5.0)) / 2.0;
    const double a18 = M_PI / 10.0;
    auto cis = [](double t) { return std::pair<double, double>{std::cos(t), std::sin(t)}; };
    auto [qx, qy] = cis(M_PI - a18);
    auto [rx, ry] = cis(M_PI + a18);
    Vec P = vec2(tau, 0.0);
    Vec Q = vec2(tau + tau * qx, tau * qy);
    Vec R = vec2(tau + tau * rx, tau * ry);
    Vec S = vec2(tau + rx, ry);
    Vec T = vec2(tau + qx, qy);

    // orientation-preserving similarity z -> a(z - p) + q, a = rot/tau
    auto spin = [&](double ang, const Vec& p, const Vec& q) {
        double ax = std::cos(ang) / tau, ay = std::sin(ang) / tau;
        double e = q(0) - (ax * p(0) - ay * p(1));
        double f = q(1) - (ay * p(0) + ax * p(1));
        return MapSpec::affine2(ax, -ay, ay, ax, e, f);
    };
    // f1: B -> gnomon piece of B (rotation by 4pi/5)
    MapSpec f1 = spin(4.0 * M_PI / 5.0, S, T);
    // f2: A -> acute piece of B: reflect across the real axis, scale, fix tau
    MapSpec f2 = MapSpec::affine2(1.0 / tau, 0, 0, -1.0 / tau, tau - 1.0, 0.0);
    // f3: A -> acute piece of A (rotation by 3pi/5)
    MapSpec f3 = spin(3.0 * M_PI / 5.0, P, Q);

    std::vector<GifsEdge> edges{
        {1, 2, f1},   // f1(B) inside A
        {1, 1, f2},   // f2(A) inside A
        {1, 1, f3},   // f3(A) inside A
        {2, 2, f1},   // f1(B) inside B
        {2, 1, f2},   // f2(A) inside B
    };
    GifsPreset out{Gifs(2, std::move(edges)), {}};
    out.polygons.push_back({P, Q, R});   // acute component
    out.polygons.push_back({P, Q, S});   // obtuse component
    return out;
}

// Two-component system: right isosceles triangle T (legs 1) and unit square S
// (placed at [2,3] x [0,1]). T splits into two half-scale triangles plus a
// half-scale square; S splits into two triangles, one square, and two
// rectangles. Shapes reconstructed from the described images; the attractor
// fixed-point check validates the coefficients.
inline GifsPreset trisquare_preset() {
    auto tri = [](double a, double b, double c, double d, double e, double f) {
        return MapSpec::affine2(a, b, c, d, e, f);
    };
    std::vector<GifsEdge> edges{
        {1, 1, tri(0.5, 0, 0, 0.5, 0.5, 0.0)},          // triangle at (1/2, 0)
        {1, 1, tri(0.5, 0, 0, 0.5, 0.0, 0.5)},          // triangle at (0, 1/2)
        {2, 1, tri(0.5, 0, 0, 0.5, 2.0, 0.0)},          // triangle into the square, lower
        {2, 1, tri(-0.5, 0, 0, -0.5, 2.5, 0.5)},        // triangle into the square, rotated
        {1, 2, tri(0.5, 0, 0, 0.5, -1.0, 0.0)},         // square corner of the triangle
        {2, 2, tri(0.5, 0, 0, 0.5, 1.0, 0.5)},          // top-left square of S
        {2, 2, tri(0.5, 0, 0, 2.0 / 3.0, 1.5, 0.0)},    // lower-right rectangle
        {2, 2, tri(0.5, 0, 0, 1.0 / 3.0, 1.5, 2.0 / 3.0)},   // upper-right rectangle
    };
    GifsPreset out{Gifs(2, std::move(edges)), {}};
    out.polygons.push_back({vec2(0, 0), vec2(1, 0), vec2(0, 1)});
    out.polygons.push_back({vec2(2, 0), vec2(3, 0), vec2(3, 1), vec2(2, 1)});
    return out;
}

} // namespace fractile
