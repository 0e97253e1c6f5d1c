#pragma once

// Word classification: the constructive strong-reversal ladder, reversible
// evidence, and the bounded-depth fullness certificate. Verdicts are
// certificates or Unknown; "false" is never claimed because the properties
// quantify over all depths.

#include <optional>

#include "fractile/region.hpp"
#include "fractile/tiling.hpp"

namespace fractile {

enum class ReversalVerdict { VerifiedStrong, VerifiedReversible, Unknown };

inline const char* to_string(ReversalVerdict v) {
    switch (v) {
        case ReversalVerdict::VerifiedStrong: return "VerifiedStrong";
        case ReversalVerdict::VerifiedReversible: return "VerifiedReversible";
        default: return "Unknown";
    }
}

struct ReversalEvidence {
    ReversalVerdict verdict = ReversalVerdict::Unknown;
    uint64_t theta_prefix_len = 0;            // letters of theta examined
    Word omega_prefix;                        // constructed reverse word prefix
    std::vector<std::pair<uint64_t, uint64_t>> matches;   // (m, L): w_1..w_L = th_{m+L}..th_{m+1}
    std::vector<uint64_t> ladder;             // strong-reversal positions t_1 < t_2 < ...

    // re-verify every stored match by direct letter comparison
    bool recheck(const InfiniteWord& theta) const {
        for (auto [m, L] : matches) {
            if (L > omega_prefix.size()) return false;
            for (uint64_t i = 1; i <= L; ++i)
                if (omega_prefix.letters[i - 1] != theta.letter(m + L - i + 1)) return false;
        }
        return true;
    }
};

// The induction behind strong reversibility: find t1 > s with sigma|s read
// backwards from t1, set omega|t1 = reverse(theta|t1); then repeatedly find
// t_{n+1} where omega|t_n occurs reversed, i.e. where the prefix theta|t_n
// recurs. Falls back to reversible evidence with omega = periodic(sigma).
inline ReversalEvidence construct_reverse_word(const InfiniteWord& theta, const Word& sigma_prefix,
                                               uint64_t t_max, int min_ladder_steps = 3,
                                               uint64_t reversible_positions = 2,
                                               uint64_t reversible_L_max = 8) {
    if (sigma_prefix.empty_word())
        throw invalid_word_error("construct_reverse_word: sigma prefix must be nonempty");
    if (sigma_prefix.alphabet != theta.alphabet())
        throw invalid_word_error("construct_reverse_word: alphabet mismatch");

    const uint64_t s = sigma_prefix.size();
    ReversalEvidence ev;
    ev.theta_prefix_len = t_max;

    // materialize the examined stretch once; the scans below are linear
    std::vector<uint8_t> th(t_max + 1);
    for (uint64_t i = 1; i <= t_max; ++i) th[i] = theta.letter(i);

    // step 1: sigma|s = theta_{t1} theta_{t1-1} ... theta_{t1-s+1}
    uint64_t t1 = 0;
    for (uint64_t t = s + 1; t <= t_max; ++t) {
        bool ok = true;
        for (uint64_t i = 0; i < s && ok; ++i)
            if (th[t - i] != sigma_prefix.letters[i]) ok = false;
        if (ok) { t1 = t; break; }
    }

    if (t1 > 0) {
        std::vector<uint64_t> ladder{t1};
        uint64_t tn = t1;
        while (static_cast<int>(ladder.size()) < min_ladder_steps) {
            // omega|tn reversed at position t  <=>  theta|tn recurs ending at t
            uint64_t found = 0;
            for (uint64_t start = 2; start + tn - 1 <= t_max; ++start) {
                bool ok = true;
                for (uint64_t i = 0; i < tn && ok; ++i)
                    if (th[start + i] != th[1 + i]) ok = false;
                if (ok) { found = start + tn - 1; break; }
            }
            if (found == 0 || found <= tn) break;
            ladder.push_back(found);
            tn = found;
        }
        if (static_cast<int>(ladder.size()) >= min_ladder_steps) {
            ev.verdict = ReversalVerdict::VerifiedStrong;
            ev.ladder = ladder;
            uint64_t wlen = ladder.back();
            Word omega;
            omega.alphabet = theta.alphabet();
            omega.letters.resize(wlen);
            for (uint64_t i = 1; i <= wlen; ++i) omega.letters[i - 1] = th[wlen - i + 1];
            ev.omega_prefix = std::move(omega);
            for (uint64_t t : ladder) ev.matches.emplace_back(0, t);   // sreveqn: m+L = t, m = 0
            return ev;
        }
    }

    // reversible fallback: omega = periodic extension of sigma (its address
    // stays in the sigma-neighborhood, hence in the interior)
    Word omega;
    omega.alphabet = theta.alphabet();
    uint64_t need = reversible_L_max;
    omega.letters.resize(need);
    for (uint64_t i = 0; i < need; ++i)
        omega.letters[i] = sigma_prefix.letters[i % s];
    bool all_L = true;
    std::vector<std::pair<uint64_t, uint64_t>> matches;
    for (uint64_t L = 1; L <= reversible_L_max && all_L; ++L) {
        uint64_t hits = 0;
        for (uint64_t m = 0; m + L <= t_max && hits < reversible_positions; ++m) {
            bool ok = true;
            for (uint64_t i = 1; i <= L && ok; ++i)
                if (omega.letters[i - 1] != th[m + L - i + 1]) ok = false;
            if (ok) {
                matches.emplace_back(m, L);
                ++hits;
            }
        }
        if (hits < reversible_positions) all_L = false;
    }
    if (all_L) {
        ev.verdict = ReversalVerdict::VerifiedReversible;
        ev.omega_prefix = std::move(omega);
        ev.matches = std::move(matches);
    }
    return ev;
}

struct FullnessWitness {
    uint64_t m = 0, n = 0;
};

struct FullnessReport {
    bool verified = false;
    std::vector<FullnessWitness> witnesses;   // two disjoint ranges when verified

    std::string str() const {
        if (!verified) return "full: unknown";
        std::string s = "full: verified,";
        for (auto w : witnesses)
            s += " (m=" + std::to_string(w.m) + ", n=" + std::to_string(w.n) + ")";
        return s;
    }
};

namespace detail {

// f_{theta_n} o ... o f_{theta_{m+1}} (A) inside the eroded attractor?
inline bool block_maps_into_interior(const Ifs& F, const RegionApprox& A, const MapSpec& block,
                                     const RegionApprox& interior) {
    if (A.is_intervals()) {
        const auto& iv = A.intervals();
        IntervalSet img = iv.map(block.linear()(0, 0), block.offset()(0));
        return interior.intervals().contains_set(img);
    }
    const Raster& ar = A.raster();
    const Raster& er = interior.raster();
    if (er.empty()) return false;
    Box2 img_box = ar.tight_bbox().image(block);
    Box2 dom = er.tight_bbox();
    if (img_box.x0 < dom.x0 || img_box.y0 < dom.y0 || img_box.x1 > dom.x1 ||
        img_box.y1 > dom.y1)
        return false;
    bool ok = true;
    ar.for_each_occupied([&](std::size_t i, std::size_t j) {
        if (!ok) return;
        double ox, oy;
        block.apply2(ar.cx(i), ar.cy(j), ox, oy);
        if (!er.contains_point(ox, oy)) ok = false;
    });
    return ok;
}

} // namespace detail

// Search m < n <= depth with the suffix block mapping A into the interior;
// a verified report needs two witnesses with m2 >= n1 (recurrence evidence).
inline FullnessReport check_full(const InfiniteWord& theta, const Ifs& F, const RegionApprox& A,
                                 uint64_t depth, int erosion_cells = 1, uint64_t window = 64) {
    if (!F.declared_contractive())
        throw not_contractive_error("check_full: ifs not declared contractive");
    FullnessReport rep;
    RegionApprox interior = interior_approx(A, erosion_cells);
    if (interior.empty()) return rep;

    uint64_t next_required_m = 0;
    for (uint64_t m = 0; m + 1 <= depth; ++m) {
        if (m < next_required_m) continue;
        MapSpec block = MapSpec::identity(F.dim());
        bool found = false;
        for (uint64_t n = m + 1; n <= std::min(depth, m + window); ++n) {
            block = F.map(theta.letter(n)).compose(block);   // prepend f_{theta_n}
            if (detail::block_maps_into_interior(F, A, block, interior)) {
                rep.witnesses.push_back({m, n});
                next_required_m = n;   // disjoint ranges: m2 >= n1
                found = true;
                break;
            }
        }
        if (found && rep.witnesses.size() >= 2) {
            rep.verified = true;
            return rep;
        }
    }
    rep.witnesses.clear();
    return rep;
}

} // namespace fractile
