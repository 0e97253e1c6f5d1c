#pragma once

// Exact 1-D region algebra: sorted disjoint closed intervals. Templated on the
// endpoint scalar so the same engine runs on double (library default) and on
// exact rationals (boost cpp_rational) when the map coefficients are rational.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "fractile/common.hpp"

namespace fractile {

template <class T>
struct IntervalSetT {
    // closed intervals [lo, hi], lo < hi, sorted, pairwise disjoint
    // (touching endpoints are merged)
    std::vector<std::pair<T, T>> parts;

    IntervalSetT() = default;
    IntervalSetT(T lo, T hi) {
        if (hi > lo) parts.emplace_back(std::move(lo), std::move(hi));
    }

    bool empty() const { return parts.empty(); }
    std::size_t count() const { return parts.size(); }

    T measure() const {
        T m{};
        for (const auto& [lo, hi] : parts) m += hi - lo;
        return m;
    }

    T lo() const { return parts.front().first; }
    T hi() const { return parts.back().second; }

    bool contains(const T& x) const {
        for (const auto& [a, b] : parts)
            if (x >= a && x <= b) return true;
        return false;
    }

    static IntervalSetT from_parts(std::vector<std::pair<T, T>> raw) {
        std::sort(raw.begin(), raw.end());
        IntervalSetT out;
        for (auto& [a, b] : raw) {
            if (!(b > a)) continue;
            if (!out.parts.empty() && a <= out.parts.back().second)
                out.parts.back().second = std::max(out.parts.back().second, b);
            else
                out.parts.emplace_back(a, b);
        }
        return out;
    }

    // image under x -> a*x + c, a != 0
    IntervalSetT map(const T& a, const T& c) const {
        std::vector<std::pair<T, T>> raw;
        raw.reserve(parts.size());
        for (const auto& [lo_, hi_] : parts) {
            T x = a * lo_ + c, y = a * hi_ + c;
            if (x > y) std::swap(x, y);
            raw.emplace_back(std::move(x), std::move(y));
        }
        return from_parts(std::move(raw));
    }

    IntervalSetT unite(const IntervalSetT& rhs) const {
        std::vector<std::pair<T, T>> raw = parts;
        raw.insert(raw.end(), rhs.parts.begin(), rhs.parts.end());
        return from_parts(std::move(raw));
    }

    IntervalSetT intersect(const IntervalSetT& rhs) const {
        IntervalSetT out;
        auto i = parts.begin();
        auto j = rhs.parts.begin();
        while (i != parts.end() && j != rhs.parts.end()) {
            T a = std::max(i->first, j->first);
            T b = std::min(i->second, j->second);
            if (b > a) out.parts.emplace_back(a, b);
            if (i->second < j->second) ++i; else ++j;
        }
        return out;
    }

    IntervalSetT subtract(const IntervalSetT& rhs) const {
        std::vector<std::pair<T, T>> cur = parts;
        for (const auto& [a, b] : rhs.parts) {
            std::vector<std::pair<T, T>> next;
            next.reserve(cur.size() + 1);
            for (auto& [lo_, hi_] : cur) {
                if (b <= lo_ || a >= hi_) {
                    next.emplace_back(lo_, hi_);
                    continue;
                }
                if (lo_ < a) next.emplace_back(lo_, a);
                if (b < hi_) next.emplace_back(b, hi_);
            }
            cur = std::move(next);
        }
        return from_parts(std::move(cur));
    }

    // shrink every interval by eps at both ends (interior surrogate)
    IntervalSetT shrink(const T& eps) const {
        std::vector<std::pair<T, T>> raw;
        for (const auto& [a, b] : parts)
            if (b - a > eps + eps) raw.emplace_back(a + eps, b - eps);
        return from_parts(std::move(raw));
    }

    bool contains_set(const IntervalSetT& rhs) const {
        return rhs.subtract(*this).empty();
    }

    // distance from a point to the set
    T distance_to(const T& x) const {
        bool first = true;
        T best{};
        for (const auto& [a, b] : parts) {
            T d{};
            if (x < a) d = a - x;
            else if (x > b) d = x - b;
            if (first || d < best) { best = d; first = false; }
        }
        return best;
    }

    bool operator==(const IntervalSetT& rhs) const { return parts == rhs.parts; }
};

// Symmetric Hausdorff distance between nonempty interval sets. The directed
// distance is attained at an endpoint of the source or at the midpoint of a
// gap of the target, so a sweep over endpoints is exact.
template <class T>
T hausdorff_1d(const IntervalSetT<T>& X, const IntervalSetT<T>& Y) {
    auto directed = [](const IntervalSetT<T>& A, const IntervalSetT<T>& B) {
        T best{};
        for (const auto& [a, b] : A.parts) {
            best = std::max(best, B.distance_to(a));
            best = std::max(best, B.distance_to(b));
            // interior gap midpoints of B that fall inside [a,b]
            for (std::size_t i = 0; i + 1 < B.parts.size(); ++i) {
                T glo = B.parts[i].second, ghi = B.parts[i + 1].first;
                T mid = (glo + ghi) / 2;
                if (mid >= a && mid <= b) best = std::max(best, B.distance_to(mid));
            }
        }
        return best;
    };
    return std::max(directed(X, Y), directed(Y, X));
}

using IntervalSet = IntervalSetT<double>;

// Merge endpoints closer than tol; keeps double-precision recursions tidy.
inline IntervalSet snap(const IntervalSet& s, double tol = 1e-12) {
    std::vector<std::pair<double, double>> raw;
    for (auto [a, b] : s.parts)
        if (b - a > tol) raw.emplace_back(a, b);
    std::sort(raw.begin(), raw.end());
    IntervalSet out;
    for (auto& [a, b] : raw) {
        if (!out.parts.empty() && a <= out.parts.back().second + tol)
            out.parts.back().second = std::max(out.parts.back().second, b);
        else
            out.parts.emplace_back(a, b);
    }
    return out;
}

} // namespace fractile
