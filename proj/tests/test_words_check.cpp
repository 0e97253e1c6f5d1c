#include <catch2/catch_amalgamated.hpp>

#include "fractile/presets.hpp"
#include "fractile/words_check.hpp"

using namespace fractile;

TEST_CASE("disjunctive words are strongly reversible: ladder within 1e6") {
    auto theta = InfiniteWord::disjunctive(2);
    auto ev = construct_reverse_word(theta, parse_finite_word("11", 2), 1000000, 3);
    REQUIRE(ev.verdict == ReversalVerdict::VerifiedStrong);
    REQUIRE(ev.ladder.size() >= 3);
    // ladder positions found by an independent scan of the stream
    REQUIRE(ev.ladder[0] == 4);
    REQUIRE(ev.ladder[1] == 20);
    REQUIRE(ev.ladder[2] == 938444);
    REQUIRE(ev.recheck(theta));
    // the constructed omega extends sigma
    REQUIRE(ev.omega_prefix.letters[0] == 1);
    REQUIRE(ev.omega_prefix.letters[1] == 1);
}

TEST_CASE("3(12) is reversible but not strongly reversible") {
    auto theta = parse_infinite_word("3(12)", 3);
    auto ev = construct_reverse_word(theta, parse_finite_word("12", 3), 10000, 3);
    REQUIRE(ev.verdict == ReversalVerdict::VerifiedReversible);
    // omega = (12)...
    REQUIRE(ev.omega_prefix.letters[0] == 1);
    REQUIRE(ev.omega_prefix.letters[1] == 2);
    REQUIRE(ev.omega_prefix.letters[2] == 1);
    REQUIRE(ev.recheck(theta));
    // reversible matches occur at L = 2 with multiple m values
    int l2 = 0;
    for (auto [m, L] : ev.matches) l2 += (L == 2);
    REQUIRE(l2 >= 2);
    // no strong ladder: the first letter 3 never recurs
    REQUIRE(ev.ladder.empty());
}

TEST_CASE("theta=(1) with sigma=2 stays unknown") {
    auto theta = parse_infinite_word("(1)", 2);
    auto ev = construct_reverse_word(theta, parse_finite_word("2", 2), 100000, 3);
    REQUIRE(ev.verdict == ReversalVerdict::Unknown);
}

TEST_CASE("strong evidence implies reversible-style matches check out") {
    // strong matches (0, t) are sreveqn instances; extract reveqn instances
    // per the implication argument and recheck them letter by letter
    auto theta = InfiniteWord::disjunctive(2);
    auto ev = construct_reverse_word(theta, parse_finite_word("11", 2), 1000000, 2);
    REQUIRE(ev.verdict == ReversalVerdict::VerifiedStrong);
    for (uint64_t t : ev.ladder) {
        uint64_t L = std::min<uint64_t>(4, t);
        uint64_t m = t - L;
        for (uint64_t i = 1; i <= L; ++i)
            REQUIRE(ev.omega_prefix.letters[i - 1] == theta.letter(m + L - i + 1));
    }
}

TEST_CASE("check_full: interval ifs with theta=(12)") {
    Ifs F = interval_ifs();
    RegionApprox A{IntervalSet(0.0, 1.0)};
    auto rep = check_full(parse_infinite_word("(12)", 2), F, A, 100);
    REQUIRE(rep.verified);
    REQUIRE(rep.witnesses.size() == 2);
    REQUIRE(rep.witnesses[1].m >= rep.witnesses[0].n);
    // the first block f1 o f2 maps [0,1] to [1/4, 1/2]
    REQUIRE(rep.witnesses[0].m == 0);
    REQUIRE(rep.witnesses[0].n == 2);
}

TEST_CASE("check_full: theta=(1) has no witness") {
    Ifs F = interval_ifs();
    RegionApprox A{IntervalSet(0.0, 1.0)};
    auto rep = check_full(parse_infinite_word("(1)", 2), F, A, 2000);
    REQUIRE_FALSE(rep.verified);
}

TEST_CASE("check_full: chair word from the figures") {
    Ifs F = chair_ifs();
    auto A = attractor_raster(F, 64);
    auto rep = check_full(parse_infinite_word("(12301230)", 4), F, A, 64);
    REQUIRE(rep.verified);
}

TEST_CASE("check_full: disjunctive words verify on presets with interior") {
    auto theta2 = InfiniteWord::disjunctive(2);
    Ifs F1 = interval_ifs();
    RegionApprox A1{IntervalSet(0.0, 1.0)};
    REQUIRE(check_full(theta2, F1, A1, 10000).verified);

    auto theta4 = InfiniteWord::disjunctive(4);
    Ifs F2 = chair_ifs();
    auto A2 = attractor_raster(F2, 32);
    REQUIRE(check_full(theta4, F2, A2, 10000).verified);

    Ifs F3 = foldout_ifs(0.5, 0.5);
    auto A3 = attractor_raster(F3, 32);
    REQUIRE(check_full(theta4, F3, A3, 10000).verified);
}

TEST_CASE("check_full on an empty-interior attractor returns unknown") {
    Ifs F = sierpinski_ifs();
    auto A = attractor_raster(F, 128);
    auto rep = check_full(InfiniteWord::disjunctive(3), F, A, 200, 2);
    REQUIRE_FALSE(rep.verified);
}

TEST_CASE("reversal evidence rejects bad inputs") {
    auto theta = parse_infinite_word("(12)", 2);
    REQUIRE_THROWS_AS(construct_reverse_word(theta, Word::empty(2), 100), invalid_word_error);
    REQUIRE_THROWS_AS(construct_reverse_word(theta, parse_finite_word("13", 3), 100),
                      invalid_word_error);
}
