#pragma once

// Self-contained exact interval arithmetic over boost cpp_rational, used as an
// independent oracle for the masked recursion. Deliberately separate from the
// library's interval engine: intervals here are half-open event lists swept by
// endpoint, not sorted closed pairs.

#include <algorithm>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Rat = boost::multiprecision::cpp_rational;

// region = indicator function, represented by breakpoints with inside flags
struct Region {
    // sorted events: (coordinate, +1 opens / -1 closes); always balanced
    std::vector<std::pair<Rat, int>> events;

    static Region interval(const Rat& lo, const Rat& hi) {
        Region r;
        if (hi > lo) {
            r.events.emplace_back(lo, +1);
            r.events.emplace_back(hi, -1);
        }
        return r;
    }

    bool empty() const { return events.empty(); }

    std::vector<std::pair<Rat, Rat>> pieces() const {
        std::vector<std::pair<Rat, Rat>> out;
        int depth = 0;
        Rat open;
        for (const auto& [x, d] : events) {
            if (depth == 0 && d > 0) open = x;
            depth += d;
            if (depth == 0 && d < 0) out.emplace_back(open, x);
        }
        return out;
    }
};

// boolean combine by sweeping both event lists; keep(a_depth, b_depth)
template <class Keep>
Region combine(const Region& A, const Region& B, Keep keep) {
    std::vector<Rat> xs;
    for (auto& [x, d] : A.events) xs.push_back(x);
    for (auto& [x, d] : B.events) xs.push_back(x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    auto inside = [](const Region& r, const Rat& lo, const Rat& hi) {
        Rat mid = (lo + hi) / 2;
        int depth = 0;
        for (auto& [x, d] : r.events) {
            if (x > mid) break;
            depth += d;
        }
        return depth > 0;
    };
    Region out;
    bool open = false;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        bool in = keep(inside(A, xs[i], xs[i + 1]), inside(B, xs[i], xs[i + 1]));
        if (in && !open) {
            out.events.emplace_back(xs[i], +1);
            open = true;
        }
        if (!in && open) {
            out.events.emplace_back(xs[i], -1);
            open = false;
        }
    }
    if (open) out.events.emplace_back(xs.back(), -1);
    return out;
}

inline Region unite(const Region& a, const Region& b) {
    return combine(a, b, [](bool x, bool y) { return x || y; });
}
inline Region intersect(const Region& a, const Region& b) {
    return combine(a, b, [](bool x, bool y) { return x && y; });
}
inline Region subtract(const Region& a, const Region& b) {
    return combine(a, b, [](bool x, bool y) { return x && !y; });
}

inline Region map(const Region& r, const Rat& a, const Rat& c) {
    Region out;
    for (auto [lo, hi] : r.pieces()) {
        Rat x = a * lo + c, y = a * hi + c;
        if (x > y) std::swap(x, y);
        out = unite(out, Region::interval(x, y));
    }
    return out;
}

struct MaskedOracle {
    std::vector<std::pair<Rat, Rat>> maps;   // x -> a x + c
    Region attractor;
    std::vector<Region> mask;
    std::vector<Region> tiles;
};

// literal expansion of the recursion, one step
inline void step(MaskedOracle& st, int theta_n, int theta_n1) {
    const int N = int(st.maps.size());
    auto [fa, fc] = st.maps[theta_n - 1];
    Rat ia = Rat(1) / fa, ic = -fc / fa;
    std::vector<Region> tiles_next;
    for (const auto& t : st.tiles)
        for (int i = 0; i < N; ++i) {
            Region piece = map(intersect(map(t, st.maps[i].first, st.maps[i].second),
                                         st.mask[i]),
                               ia, ic);
            if (!piece.empty()) tiles_next.push_back(std::move(piece));
        }
    std::vector<std::pair<Rat, Rat>> maps_next;
    for (int i = 0; i < N; ++i) {
        // f^-1 o f_i o f
        Rat a = ia * st.maps[i].first * fa;
        Rat c = ia * (st.maps[i].first * fc + st.maps[i].second) + ic;
        maps_next.emplace_back(a, c);
    }
    Region a_next = map(st.attractor, ia, ic);
    std::vector<Region> mask_next(N);
    mask_next[theta_n1 - 1] =
        map(a_next, maps_next[theta_n1 - 1].first, maps_next[theta_n1 - 1].second);
    for (int j = 0; j < N; ++j)
        if (j != theta_n1 - 1)
            mask_next[j] = subtract(map(st.mask[j], ia, ic), mask_next[theta_n1 - 1]);
    st.maps = std::move(maps_next);
    st.attractor = std::move(a_next);
    st.mask = std::move(mask_next);
    st.tiles = std::move(tiles_next);
}

} // namespace oracle
