#pragma once

// IFS containers and the word-indexed composition algebra:
//   compose(F, w)          = f_{w1} o f_{w2} o ... o f_{wk}
//   inverse_compose(F, w)  = f^-1_{w1} o f^-1_{w2} o ... o f^-1_{wk}
// Note (f^-1)_w != (f_w)^-1 in general; the identity
// inverse_compose(F, w) == invert(compose(F, reverse(w))) holds instead.

#include <vector>

#include "fractile/map.hpp"
#include "fractile/word.hpp"

namespace fractile {

class Ifs {
public:
    Ifs(int dim, std::vector<MapSpec> maps, bool declared_contractive = true)
        : dim_(dim), maps_(std::move(maps)), declared_contractive_(declared_contractive) {
        if (maps_.empty()) throw config_error("ifs: needs at least one map");
        for (const auto& m : maps_)
            if (m.dim() != dim_) throw dim_mismatch_error("ifs: map dim mismatch");
        // eager inverses keep the object immutable, hence freely shareable
        // across threads
        inverses_.reserve(maps_.size());
        for (const auto& m : maps_) inverses_.push_back(m.inverse());
    }

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(maps_.size()); }
    bool declared_contractive() const { return declared_contractive_; }
    const MapSpec& map(int letter) const {   // 1-based letter
        if (letter < 1 || letter > size())
            throw invalid_word_error("ifs: letter " + std::to_string(letter) + " out of range");
        return maps_[letter - 1];
    }
    const std::vector<MapSpec>& maps() const { return maps_; }

    const MapSpec& inverse_map(int letter) const {
        if (letter < 1 || letter > size())
            throw invalid_word_error("ifs: letter " + std::to_string(letter) + " out of range");
        return inverses_[letter - 1];
    }

    // The IFS F* of inverse maps.
    Ifs star() const { return Ifs(dim_, inverses_, false); }

    void check_word(const Word& w) const {
        if (w.alphabet != size())
            throw invalid_word_error("word alphabet does not match ifs map count");
        w.validate();
    }

private:
    int dim_;
    std::vector<MapSpec> maps_;
    bool declared_contractive_;
    std::vector<MapSpec> inverses_;
};

inline MapSpec compose(const Ifs& F, const Word& w) {
    F.check_word(w);
    MapSpec m = MapSpec::identity(F.dim());
    // right-to-left: innermost map first
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        m = F.map(*it).compose(m);
    return m;
}

inline MapSpec inverse_compose(const Ifs& F, const Word& w) {
    F.check_word(w);
    MapSpec m = MapSpec::identity(F.dim());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        m = F.inverse_map(*it).compose(m);
    return m;
}

// Largest singular value over the maps of F; a value < 1 certifies
// contractivity in the Euclidean metric (sufficient, not necessary).
inline double estimate_contraction(const Ifs& F, const Vec& window_lo = Vec(),
                                   const Vec& window_hi = Vec()) {
    double worst = 0.0;
    for (const auto& m : F.maps())
        worst = std::max(worst, m.lipschitz_estimate(window_lo, window_hi));
    return worst;
}

// Bounding ball (center, radius) with A subset B(center, radius), from the
// standard estimate r = max_i |f_i(c) - c| / (1 - lambda).
inline std::pair<Vec, double> attractor_bound(const Ifs& F) {
    double lambda = estimate_contraction(F);
    if (lambda >= 1.0)
        throw not_contractive_error("attractor bound needs a certified contraction");
    Vec c = Vec::Zero(F.dim());
    double worst = 0.0;
    for (const auto& m : F.maps()) worst = std::max(worst, (m.apply(c) - c).norm());
    return {c, worst / (1.0 - lambda)};
}

struct CoordinatePoint {
    Vec point;
    double error_bound;
};

// pi(omega) ~ f_{omega|depth}(x0), with the a-priori bound
// lambda^depth * (2R + d(x0, ball)) on the distance to the true limit.
inline CoordinatePoint coordinate_point(const Ifs& F, const InfiniteWord& omega, int depth,
                                        const Vec& x0) {
    if (!F.declared_contractive())
        throw not_contractive_error("coordinate_point: ifs not declared contractive");
    if (depth < 1) throw invalid_word_error("coordinate_point: depth must be >= 1");
    if (omega.alphabet() != F.size())
        throw invalid_word_error("coordinate_point: word alphabet mismatch");
    Vec x = x0;
    for (int i = depth; i >= 1; --i) x = F.map(omega.letter(i)).apply(x);
    double lambda = estimate_contraction(F);
    auto [c, r] = attractor_bound(F);
    double err = std::pow(lambda, depth) * (2.0 * r + std::max(0.0, (x0 - c).norm() - r));
    return {std::move(x), err};
}

inline Vec coordinate_point_simple(const Ifs& F, const InfiniteWord& omega, int depth) {
    auto [c, r] = attractor_bound(F);
    return coordinate_point(F, omega, depth, c).point;
}

// f_{w}(x) evaluated without materializing the composition.
inline Vec apply_word(const Ifs& F, const Word& w, Vec x) {
    F.check_word(w);
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        x = F.map(*it).apply(x);
    return x;
}

} // namespace fractile
