#pragma once

// 2-D occupancy raster over an axis-aligned box: the workhorse approximation
// for attractors, masks, basins, and tile geometry. Cells are squares of side
// 1/res; cell (i,j) has center lo + ((i+0.5)/res, (j+0.5)/res).

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "fractile/common.hpp"
#include "fractile/map.hpp"

namespace fractile {

struct Box2 {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    bool valid() const { return x1 > x0 && y1 > y0; }
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }

    Box2 unite(const Box2& b) const {
        if (!valid()) return b;
        if (!b.valid()) return *this;
        return {std::min(x0, b.x0), std::min(y0, b.y0), std::max(x1, b.x1), std::max(y1, b.y1)};
    }
    Box2 intersect(const Box2& b) const {
        return {std::max(x0, b.x0), std::max(y0, b.y0), std::min(x1, b.x1), std::min(y1, b.y1)};
    }
    bool overlaps(const Box2& b) const { return intersect(b).valid(); }
    Box2 pad(double m) const { return {x0 - m, y0 - m, x1 + m, y1 + m}; }

    // image box under an affine map (corner hull); projective maps get a
    // sampled hull of the boundary
    Box2 image(const MapSpec& m) const {
        double cx[4] = {x0, x1, x0, x1};
        double cy[4] = {y0, y0, y1, y1};
        Box2 out;
        bool first = true;
        int samples = m.is_affine() ? 4 : 64;
        for (int s = 0; s < samples; ++s) {
            double px, py;
            if (m.is_affine()) {
                px = cx[s];
                py = cy[s];
            } else {
                double t = double(s) / samples * 4.0;
                int edge = int(t);
                double u = t - edge;
                switch (edge) {
                    case 0: px = x0 + u * width(); py = y0; break;
                    case 1: px = x1; py = y0 + u * height(); break;
                    case 2: px = x1 - u * width(); py = y1; break;
                    default: px = x0; py = y1 - u * height(); break;
                }
            }
            double ox, oy;
            m.apply2(px, py, ox, oy);
            if (first) { out = {ox, oy, ox, oy}; first = false; }
            else {
                out.x0 = std::min(out.x0, ox); out.y0 = std::min(out.y0, oy);
                out.x1 = std::max(out.x1, ox); out.y1 = std::max(out.y1, oy);
            }
        }
        return out;
    }
};

class Raster {
public:
    Raster() = default;

    Raster(Box2 bbox, double res, std::size_t cell_budget = kDefaultCellBudget)
        : res_(res) {
        if (!bbox.valid() || res <= 0) throw config_error("raster: empty bbox or bad resolution");
        // snap bounds outward to the global lattice k/res so grids align; the
        // epsilon absorbs float noise on exact lattice boundaries
        long ix0 = (long)std::floor(bbox.x0 * res + 1e-9);
        long iy0 = (long)std::floor(bbox.y0 * res + 1e-9);
        long ix1 = (long)std::ceil(bbox.x1 * res - 1e-9);
        long iy1 = (long)std::ceil(bbox.y1 * res - 1e-9);
        nx_ = std::size_t(ix1 - ix0);
        ny_ = std::size_t(iy1 - iy0);
        ox_ = ix0;
        oy_ = iy0;
        if (nx_ == 0 || ny_ == 0) throw config_error("raster: degenerate grid");
        if (nx_ * ny_ > cell_budget)
            throw budget_exceeded_error("raster: " + std::to_string(nx_ * ny_) +
                                        " cells exceed budget " + std::to_string(cell_budget));
        bits_.assign((nx_ * ny_ + 63) / 64, 0);
    }

    double res() const { return res_; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double cell() const { return 1.0 / res_; }
    Box2 bbox() const {
        return {ox_ / res_, oy_ / res_, (ox_ + double(nx_)) / res_, (oy_ + double(ny_)) / res_};
    }

    bool get(std::size_t i, std::size_t j) const {
        std::size_t k = j * nx_ + i;
        return (bits_[k >> 6] >> (k & 63)) & 1;
    }
    void set(std::size_t i, std::size_t j) {
        std::size_t k = j * nx_ + i;
        bits_[k >> 6] |= uint64_t(1) << (k & 63);
    }
    void clear(std::size_t i, std::size_t j) {
        std::size_t k = j * nx_ + i;
        bits_[k >> 6] &= ~(uint64_t(1) << (k & 63));
    }

    double cx(std::size_t i) const { return (ox_ + double(i) + 0.5) / res_; }
    double cy(std::size_t j) const { return (oy_ + double(j) + 0.5) / res_; }

    // cell indices of a point; false if outside the grid
    bool locate(double x, double y, std::size_t& i, std::size_t& j) const {
        double fx = x * res_ - ox_;
        double fy = y * res_ - oy_;
        if (fx < 0 || fy < 0) return false;
        std::size_t ii = std::size_t(fx), jj = std::size_t(fy);
        if (ii >= nx_ || jj >= ny_) return false;
        i = ii;
        j = jj;
        return true;
    }

    bool contains_point(double x, double y) const {
        std::size_t i, j;
        return locate(x, y, i, j) && get(i, j);
    }

    // membership with a tolerance of `ring` cells in Chebyshev distance
    bool contains_point_dilated(double x, double y, int ring) const {
        double fx = x * res_ - ox_;
        double fy = y * res_ - oy_;
        long ci = (long)std::floor(fx), cj = (long)std::floor(fy);
        for (long dj = -ring; dj <= ring; ++dj)
            for (long di = -ring; di <= ring; ++di) {
                long i = ci + di, j = cj + dj;
                if (i < 0 || j < 0 || i >= (long)nx_ || j >= (long)ny_) continue;
                if (get(std::size_t(i), std::size_t(j))) return true;
            }
        return false;
    }

    void set_point(double x, double y) {
        std::size_t i, j;
        if (locate(x, y, i, j)) set(i, j);
    }

    // center of the nearest occupied cell within max_ring Chebyshev rings
    bool nearest_occupied(double x, double y, int max_ring, double& ox, double& oy) const {
        long ci = (long)std::floor(x * res_ - ox_);
        long cj = (long)std::floor(y * res_ - oy_);
        for (int ring = 0; ring <= max_ring; ++ring) {
            double best = std::numeric_limits<double>::max();
            bool found = false;
            for (long dj = -ring; dj <= ring; ++dj)
                for (long di = -ring; di <= ring; ++di) {
                    if (std::max(std::labs(di), std::labs(dj)) != ring) continue;
                    long i = ci + di, j = cj + dj;
                    if (i < 0 || j < 0 || i >= (long)nx_ || j >= (long)ny_) continue;
                    if (!get(std::size_t(i), std::size_t(j))) continue;
                    double dx = cx(std::size_t(i)) - x, dy = cy(std::size_t(j)) - y;
                    double d2 = dx * dx + dy * dy;
                    if (d2 < best) {
                        best = d2;
                        ox = cx(std::size_t(i));
                        oy = cy(std::size_t(j));
                        found = true;
                    }
                }
            if (found) return true;
        }
        return false;
    }

    std::size_t popcount() const {
        std::size_t n = 0;
        for (uint64_t w : bits_) n += std::size_t(__builtin_popcountll(w));
        return n;
    }

    bool empty() const {
        for (uint64_t w : bits_) if (w) return false;
        return true;
    }

    bool same_grid(const Raster& r) const {
        return res_ == r.res_ && nx_ == r.nx_ && ny_ == r.ny_ && ox_ == r.ox_ && oy_ == r.oy_;
    }

    Raster& operator|=(const Raster& r) {
        require_same_grid(r);
        for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] |= r.bits_[k];
        return *this;
    }
    Raster& operator&=(const Raster& r) {
        require_same_grid(r);
        for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] &= r.bits_[k];
        return *this;
    }
    Raster& subtract(const Raster& r) {
        require_same_grid(r);
        for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] &= ~r.bits_[k];
        return *this;
    }

    // occupied-cell bounding box (in world coordinates); invalid box when empty
    Box2 tight_bbox() const {
        std::size_t i0 = nx_, j0 = ny_, i1 = 0, j1 = 0;
        bool any = false;
        for (std::size_t j = 0; j < ny_; ++j)
            for (std::size_t i = 0; i < nx_; ++i)
                if (get(i, j)) {
                    any = true;
                    i0 = std::min(i0, i); j0 = std::min(j0, j);
                    i1 = std::max(i1, i); j1 = std::max(j1, j);
                }
        if (!any) return {};
        return {(ox_ + double(i0)) / res_, (oy_ + double(j0)) / res_,
                (ox_ + double(i1) + 1.0) / res_, (oy_ + double(j1) + 1.0) / res_};
    }

    // Chebyshev-ball morphological erosion / dilation
    Raster eroded(int radius) const {
        Raster out = *this;
        for (int pass = 0; pass < radius; ++pass) {
            Raster cur = out;
            for (std::size_t j = 0; j < ny_; ++j)
                for (std::size_t i = 0; i < nx_; ++i) {
                    if (!cur.get(i, j)) continue;
                    bool keep = true;
                    for (int dj = -1; dj <= 1 && keep; ++dj)
                        for (int di = -1; di <= 1 && keep; ++di) {
                            long a = long(i) + di, b = long(j) + dj;
                            if (a < 0 || b < 0 || a >= (long)nx_ || b >= (long)ny_ ||
                                !cur.get(std::size_t(a), std::size_t(b)))
                                keep = false;
                        }
                    if (!keep) out.clear(i, j);
                }
        }
        return out;
    }

    Raster dilated(int radius) const {
        Raster out = *this;
        for (int pass = 0; pass < radius; ++pass) {
            Raster cur = out;
            for (std::size_t j = 0; j < ny_; ++j)
                for (std::size_t i = 0; i < nx_; ++i) {
                    if (cur.get(i, j)) continue;
                    bool hit = false;
                    for (int dj = -1; dj <= 1 && !hit; ++dj)
                        for (int di = -1; di <= 1 && !hit; ++di) {
                            long a = long(i) + di, b = long(j) + dj;
                            if (a >= 0 && b >= 0 && a < (long)nx_ && b < (long)ny_ &&
                                cur.get(std::size_t(a), std::size_t(b)))
                                hit = true;
                        }
                    if (hit) out.set(i, j);
                }
        }
        return out;
    }

    template <class Fn>
    void for_each_occupied(Fn&& fn) const {
        for (std::size_t j = 0; j < ny_; ++j)
            for (std::size_t i = 0; i < nx_; ++i)
                if (get(i, j)) fn(i, j);
    }

private:
    void require_same_grid(const Raster& r) const {
        if (!same_grid(r)) throw dim_mismatch_error("raster: grid mismatch in set operation");
    }

    double res_ = 0;
    std::size_t nx_ = 0, ny_ = 0;
    long ox_ = 0, oy_ = 0;   // lattice offset: world lo corner = (ox/res, oy/res)
    std::vector<uint64_t> bits_;
};

// Exact squared Euclidean distance transform (Felzenszwalb-Huttenlocher),
// distances in cell units; unoccupied input cells start at +inf.
inline std::vector<float> distance_transform_sq(const Raster& r) {
    const std::size_t nx = r.nx(), ny = r.ny();
    const float INF = std::numeric_limits<float>::max() / 4;
    std::vector<float> d(nx * ny);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i)
            d[j * nx + i] = r.get(i, j) ? 0.f : INF;

    std::vector<float> f(std::max(nx, ny)), dd(std::max(nx, ny));
    std::vector<int> v(std::max(nx, ny));
    std::vector<float> z(std::max(nx, ny) + 1);
    auto edt1d = [&](std::size_t n) {
        int k = 0;
        v[0] = 0;
        z[0] = -INF;
        z[1] = INF;
        for (int q = 1; q < (int)n; ++q) {
            float s;
            while (true) {
                s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.f * q - 2.f * v[k]);
                if (s <= z[k]) --k; else break;
            }
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = INF;
        }
        k = 0;
        for (int q = 0; q < (int)n; ++q) {
            while (z[k + 1] < q) ++k;
            float dq = float(q - v[k]);
            dd[q] = dq * dq + f[v[k]];
        }
    };

    for (std::size_t j = 0; j < ny; ++j) {   // rows
        for (std::size_t i = 0; i < nx; ++i) f[i] = d[j * nx + i];
        edt1d(nx);
        for (std::size_t i = 0; i < nx; ++i) d[j * nx + i] = dd[i];
    }
    for (std::size_t i = 0; i < nx; ++i) {   // columns
        for (std::size_t j = 0; j < ny; ++j) f[j] = d[j * nx + i];
        edt1d(ny);
        for (std::size_t j = 0; j < ny; ++j) d[j * nx + i] = dd[j];
    }
    return d;
}

} // namespace fractile
