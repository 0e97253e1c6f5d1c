#include <catch2/catch_amalgamated.hpp>

#include "fractile/raster.hpp"

using namespace fractile;

namespace {

Raster full_box(Box2 b, double res) {
    Raster r(b, res);
    for (std::size_t j = 0; j < r.ny(); ++j)
        for (std::size_t i = 0; i < r.nx(); ++i) r.set(i, j);
    return r;
}

} // namespace

TEST_CASE("raster cells align to the global lattice") {
    Raster a({0.0, 0.0, 1.0, 1.0}, 8);
    REQUIRE(a.nx() == 8);
    REQUIRE(a.ny() == 8);
    Raster b({0.26, 0.26, 0.9, 0.9}, 8);
    // both grids place cell centers on the same lattice
    std::size_t i, j;
    REQUIRE(b.locate(a.cx(3), a.cy(3), i, j));
    REQUIRE(b.cx(i) == Catch::Approx(a.cx(3)));
}

TEST_CASE("erosion of a full box removes exactly one ring per pass") {
    auto r = full_box({0, 0, 1, 1}, 16);
    auto e = r.eroded(1);
    REQUIRE(e.popcount() == 14 * 14);
    auto e2 = r.eroded(2);
    REQUIRE(e2.popcount() == 12 * 12);
    // dilation undoes erosion on a convex box
    auto back = e.dilated(1);
    REQUIRE(back.popcount() == 16 * 16);
}

TEST_CASE("eroded square keeps most of its area at res 256") {
    auto r = full_box({0, 0, 1, 1}, 256);
    auto e = r.eroded(2);
    double frac = double(e.popcount()) / double(r.popcount());
    REQUIRE(frac >= 0.96);
}

TEST_CASE("set algebra and budget") {
    Raster a({0, 0, 1, 1}, 4);
    a.set(0, 0);
    Raster b({0, 0, 1, 1}, 4);
    b.set(0, 0);
    b.set(1, 1);
    Raster c = a;
    c |= b;
    REQUIRE(c.popcount() == 2);
    c.subtract(a);
    REQUIRE(c.popcount() == 1);
    REQUIRE(c.get(1, 1));
    REQUIRE_THROWS_AS(Raster({0, 0, 1000.0, 1000.0}, 4096), budget_exceeded_error);
}

TEST_CASE("distance transform gives exact euclidean distances") {
    Raster r({0, 0, 1, 1}, 16);
    r.set(3, 4);
    auto d = distance_transform_sq(r);
    REQUIRE(d[4 * r.nx() + 3] == 0.0f);
    REQUIRE(d[4 * r.nx() + 7] == 16.0f);            // 4 cells to the right
    REQUIRE(d[8 * r.nx() + 6] == Catch::Approx(25.0f));   // (3,4) offset
}

TEST_CASE("box image under maps") {
    auto m = MapSpec::affine2(0.5, 0, 0, 0.5, 0.25, 0.25);
    Box2 b{0, 0, 1, 1};
    Box2 im = b.image(m);
    REQUIRE(im.x0 == Catch::Approx(0.25));
    REQUIRE(im.x1 == Catch::Approx(0.75));
}
