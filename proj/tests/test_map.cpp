#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fractile/ifs.hpp"
#include "fractile/presets.hpp"

using namespace fractile;

namespace {

Word random_word(std::mt19937& rng, int alphabet, int max_len) {
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_int_distribution<int> let(1, alphabet);
    std::vector<uint8_t> letters;
    int k = len(rng);
    for (int i = 0; i < k; ++i) letters.push_back(uint8_t(let(rng)));
    return Word(std::move(letters), alphabet);
}

// well-conditioned contractions: rotations around a diagonal of singular
// values in [0.25, 0.5], so long compositions stay numerically clean
Ifs random_affine_ifs(std::mt19937& rng, int dim, int n) {
    std::uniform_real_distribution<double> sv(0.25, 0.5);
    std::uniform_real_distribution<double> ang(0.0, 6.283);
    std::uniform_real_distribution<double> off(-1.0, 1.0);
    auto rotation = [&](double t) {
        Mat R = Mat::Identity(dim, dim);
        if (dim >= 2) {
            R(0, 0) = std::cos(t); R(0, 1) = -std::sin(t);
            R(1, 0) = std::sin(t); R(1, 1) = std::cos(t);
        }
        return R;
    };
    std::vector<MapSpec> maps;
    for (int i = 0; i < n; ++i) {
        Mat D = Mat::Zero(dim, dim);
        for (int d = 0; d < dim; ++d) D(d, d) = sv(rng) * (rng() % 2 ? 1.0 : -1.0);
        Mat L = rotation(ang(rng)) * D * rotation(ang(rng));
        Vec b(dim);
        for (int r = 0; r < dim; ++r) b(r) = off(rng);
        maps.push_back(MapSpec::affine(L, b));
    }
    return Ifs(dim, std::move(maps));
}

} // namespace

TEST_CASE("affine apply/invert round trip") {
    auto m = MapSpec::affine2(0.3, -0.1, 0.2, 0.4, 1.0, -2.0);
    auto mi = m.inverse();
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int k = 0; k < 100; ++k) {
        Vec x = vec2(u(rng), u(rng));
        Vec y = mi.apply(m.apply(x));
        REQUIRE((y - x).norm() < 1e-9);
    }
}

TEST_CASE("projective apply, inverse, horizon error") {
    Mat H(3, 3);
    H << 1.0, 0.2, 0.1,
         0.0, 0.9, -0.3,
         0.1, 0.0, 1.0;
    auto m = MapSpec::projective(H);
    auto mi = m.inverse();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 100; ++k) {
        Vec x = vec2(u(rng), u(rng));
        Vec y = mi.apply(m.apply(x));
        REQUIRE((y - x).norm() < 1e-9);
    }
    // point on the line at infinity of the chart: 0.1 x + 1 = 0
    REQUIRE_THROWS_AS(m.apply(vec2(-10.0, 0.0)), numeric_error);
}

TEST_CASE("singular maps rejected") {
    Mat L(2, 2);
    L << 1, 2, 2, 4;
    REQUIRE_THROWS_AS(MapSpec::affine(L, Vec::Zero(2)), numeric_error);
}

TEST_CASE("compose single letters and empty word") {
    Ifs F = interval_ifs();
    auto f2 = compose(F, parse_finite_word("2", 2));
    REQUIRE(f2.apply1(0.0) == Catch::Approx(0.5));
    REQUIRE(f2.apply1(1.0) == Catch::Approx(1.0));

    // f2 o f1 = x/4 + 1/2 (checked at 0 and 1)
    auto f21 = compose(F, parse_finite_word("21", 2));
    REQUIRE(f21.apply1(0.0) == Catch::Approx(0.5));
    REQUIRE(f21.apply1(1.0) == Catch::Approx(0.75));
    REQUIRE(f21.linear()(0, 0) == Catch::Approx(0.25));

    auto id = compose(F, Word::empty(2));
    REQUIRE(id.apply1(0.37) == Catch::Approx(0.37));
}

TEST_CASE("inverse_compose hand values") {
    Ifs F = interval_ifs();
    auto g1 = inverse_compose(F, parse_finite_word("1", 2));
    REQUIRE(g1.apply1(0.25) == Catch::Approx(0.5));   // x -> 2x

    // (f^-1)_{12} = f1^-1 o f2^-1 = 4x - 2
    auto g12 = inverse_compose(F, parse_finite_word("12", 2));
    REQUIRE(g12.apply1(0.0) == Catch::Approx(-2.0));
    REQUIRE(g12.apply1(1.0) == Catch::Approx(2.0));

    auto alt = compose(F, parse_finite_word("21", 2)).inverse();
    REQUIRE(g12.distance(alt) < 1e-12);
}

TEST_CASE("inverse_compose(F,w) == invert(compose(F,reverse(w)))") {
    std::mt19937 rng(101);
    Ifs F = random_affine_ifs(rng, 2, 3);
    for (int k = 0; k < 100; ++k) {
        Word w = random_word(rng, 3, 10);
        auto lhs = inverse_compose(F, w);
        auto rhs = compose(F, w.reversed()).inverse();
        REQUIRE(lhs.distance(rhs) < 1e-12);
    }
}

TEST_CASE("compose is a monoid morphism: compose(F, uv) = compose(F,u) o compose(F,v)") {
    std::mt19937 rng(202);
    for (int dim = 1; dim <= 3; ++dim) {
        Ifs F = random_affine_ifs(rng, dim, 2 + dim);
        for (int k = 0; k < 40; ++k) {
            Word u = random_word(rng, F.size(), 6);
            Word v = random_word(rng, F.size(), 6);
            auto lhs = compose(F, u.concat(v));
            auto rhs = compose(F, u).compose(compose(F, v));
            REQUIRE(lhs.distance(rhs) < 1e-12);
        }
    }
}

TEST_CASE("inverse_compose o compose(reverse) is the identity") {
    std::mt19937 rng(303);
    Ifs F = random_affine_ifs(rng, 2, 4);
    for (int k = 0; k < 60; ++k) {
        Word w = random_word(rng, 4, 6);
        auto m = inverse_compose(F, w).compose(compose(F, w.reversed()));
        REQUIRE(m.distance(MapSpec::identity(2)) < 1e-12);
    }
}

TEST_CASE("estimate_contraction on presets") {
    REQUIRE(estimate_contraction(interval_ifs()) == Catch::Approx(0.5));
    REQUIRE(estimate_contraction(chair_ifs()) == Catch::Approx(0.5));
    double lam = estimate_contraction(foldout_ifs(2.0 / 3.0, 1.0 / 3.0));
    REQUIRE(lam == Catch::Approx(2.0 / 3.0));
    REQUIRE(lam > 0.0);
    REQUIRE(lam < 1.0);
}

TEST_CASE("projective lipschitz estimate matches affine embedding") {
    // an affine map written projectively contracts identically
    auto aff = MapSpec::affine2(0.5, 0, 0, 0.5, 0.25, 0.25);
    auto prj = MapSpec::projective(aff.homogeneous());
    double est = prj.lipschitz_estimate(vec2(-1, -1), vec2(1, 1));
    REQUIRE(est == Catch::Approx(0.5).margin(1e-4));
}
