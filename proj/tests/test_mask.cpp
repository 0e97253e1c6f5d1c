#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include "fractile/mask.hpp"
#include "fractile/presets.hpp"
#include "oracle_intervals.hpp"

using namespace fractile;

namespace {

RegionApprox unit_interval() { return RegionApprox{IntervalSet(0.0, 1.0)}; }

std::vector<double> sorted_endpoints(const std::vector<MaskedTile>& tiles) {
    std::vector<double> out;
    for (const auto& t : tiles)
        for (auto [lo, hi] : t.geometry.intervals().parts) {
            out.push_back(lo);
            out.push_back(hi);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-9; }),
              out.end());
    return out;
}

} // namespace

TEST_CASE("default mask on the interval ifs") {
    Ifs F = interval_ifs();
    auto M = default_mask(F, unit_interval());
    REQUIRE(M.regions[0].intervals().lo() == Catch::Approx(0.0));
    REQUIRE(M.regions[0].intervals().hi() == Catch::Approx(0.5));
    REQUIRE(M.regions[1].intervals().lo() == Catch::Approx(0.5));
    REQUIRE(M.regions[1].intervals().hi() == Catch::Approx(1.0));
    REQUIRE(validate_mask(F, unit_interval(), M).ok());
}

TEST_CASE("default mask rejects the overlapping pair") {
    Ifs F = overlap1d_ifs(0.65);
    REQUIRE_THROWS_AS(default_mask(F, unit_interval()), not_nonoverlapping_error);
}

TEST_CASE("default mask on the chair ifs: four quadrant images") {
    Ifs F = chair_ifs();
    auto A = attractor_raster(F, 64);
    auto M = default_mask(F, A);
    REQUIRE(M.regions.size() == 4);
    REQUIRE(validate_mask(F, A, M).ok());
    for (int i = 1; i <= 4; ++i) {
        double d = hausdorff_distance(M.regions[i - 1], map_image(F, i, A));
        REQUIRE(d <= 2.0 / 64.0);
    }
}

TEST_CASE("tops mask on the b=0.65 pair: [0,b], [b,1]") {
    Ifs F = overlap1d_ifs(0.65);
    auto M = tops_mask(F, unit_interval());
    REQUIRE(M.regions[0].intervals().lo() == Catch::Approx(0.0));
    REQUIRE(M.regions[0].intervals().hi() == Catch::Approx(0.65));
    REQUIRE(M.regions[1].intervals().lo() == Catch::Approx(0.65));
    REQUIRE(M.regions[1].intervals().hi() == Catch::Approx(1.0));
    REQUIRE(validate_mask(F, unit_interval(), M).ok());
}

TEST_CASE("tops mask equals default mask when non-overlapping") {
    Ifs F = interval_ifs();
    auto Mt = tops_mask(F, unit_interval());
    auto Md = default_mask(F, unit_interval());
    for (int i = 0; i < 2; ++i)
        REQUIRE(hausdorff_distance(Mt.regions[i], Md.regions[i]) < 1e-9);

    Ifs C = chair_ifs();
    auto A = attractor_raster(C, 64);
    auto Mt2 = tops_mask(C, A);
    auto Md2 = default_mask(C, A);
    for (int i = 0; i < 4; ++i)
        REQUIRE(hausdorff_distance(Mt2.regions[i], Md2.regions[i]) <= 2.0 / 64.0);
}

TEST_CASE("tops mask of the 2-D b=0.65 square family") {
    Ifs F = overlap2d_ifs(0.65);
    auto A = attractor_raster(F, 64);
    auto M = tops_mask(F, A);
    REQUIRE(validate_mask(F, A, M).ok());
    // M1 is the full b x b square; the others are L-shaped differences
    Box2 b1 = M.regions[0].raster().tight_bbox();
    REQUIRE(b1.x1 == Catch::Approx(0.65).margin(2.0 / 64.0));
    REQUIRE(b1.y1 == Catch::Approx(0.65).margin(2.0 / 64.0));
    double area1 = double(M.regions[0].raster().popcount()) / (64.0 * 64.0);
    REQUIRE(area1 == Catch::Approx(0.65 * 0.65).margin(0.02));
    // region 2 occupies the right strip (b,1] x [0,b]
    double area2 = double(M.regions[1].raster().popcount()) / (64.0 * 64.0);
    REQUIRE(area2 == Catch::Approx(0.35 * 0.65).margin(0.02));
    // region 4 is the rest
    double area4 = double(M.regions[3].raster().popcount()) / (64.0 * 64.0);
    REQUIRE(area4 == Catch::Approx(0.35 * 0.35).margin(0.03));
}

TEST_CASE("masked tiling with default mask reproduces the plain tiling (1-D exact)") {
    Ifs F = interval_ifs();
    auto theta = parse_infinite_word("(12)", 2);
    auto M = default_mask(F, unit_interval());
    auto masked = masked_tiling(F, unit_interval(), M, theta, 6);
    Tiling plain(F, unit_interval(), theta, 6);

    REQUIRE(masked.tiles.size() == plain.tiles().size());
    std::vector<std::pair<double, double>> a, b;
    for (const auto& t : masked.tiles)
        a.emplace_back(t.geometry.intervals().lo(), t.geometry.intervals().hi());
    for (const auto& t : plain.tiles()) {
        auto g = plain.geometry(t).intervals();
        b.emplace_back(g.lo(), g.hi());
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].first == Catch::Approx(b[i].first).margin(1e-9));
        REQUIRE(a[i].second == Catch::Approx(b[i].second).margin(1e-9));
    }
}

TEST_CASE("masked tiling with default mask reproduces the plain tiling (2-D raster)") {
    Ifs F = chair_ifs();
    auto A = attractor_raster(F, 32);
    auto theta = parse_infinite_word("(12)", 4);
    auto M = default_mask(F, A);
    auto masked = masked_tiling(F, A, M, theta, 3);
    Tiling plain(F, A, theta, 3);
    REQUIRE(masked.tiles.size() == plain.tiles().size());
    // match each masked tile to a plain tile within one cell
    double cell = 1.0 / 32.0;
    for (const auto& mt : masked.tiles) {
        double best = 1e9;
        for (const auto& pt : plain.tiles()) {
            auto g = plain.geometry(pt);
            best = std::min(best, hausdorff_distance(mt.geometry, g));
        }
        REQUIRE(best <= 1.5 * cell);
    }
}

TEST_CASE("mask precondition: theta_1 region must be the full image") {
    Ifs F = overlap1d_ifs(0.65);
    auto M = tops_mask(F, unit_interval());
    auto theta2 = parse_infinite_word("(2)", 2);
    REQUIRE_THROWS_AS(masked_tiling(F, unit_interval(), M, theta2, 2), invalid_mask_error);
    // rotation flag rebuilds a theta-first tops mask
    auto res = masked_tiling(F, unit_interval(), M, theta2, 2, true);
    REQUIRE(res.tiles.size() >= 2);
}

TEST_CASE("masked recursion on b=0.65 against the exact rational oracle") {
    using oracle::Rat;
    Ifs F = overlap1d_ifs(0.65);
    auto theta = parse_infinite_word("(1)", 2);
    auto M = tops_mask(F, unit_interval());
    auto got = masked_tiling(F, unit_interval(), M, theta, 6);

    oracle::MaskedOracle st;
    st.maps = {{Rat(13, 20), Rat(0)}, {Rat(13, 20), Rat(7, 20)}};
    st.attractor = oracle::Region::interval(0, 1);
    st.mask = {oracle::Region::interval(Rat(0), Rat(13, 20)),
               oracle::Region::interval(Rat(13, 20), Rat(1))};
    st.tiles = {st.attractor};
    std::vector<std::size_t> expected_counts;
    for (int n = 1; n <= 6; ++n) {
        oracle::step(st, 1, 1);
        expected_counts.push_back(st.tiles.size());
    }
    // tile counts per step
    REQUIRE(expected_counts == std::vector<std::size_t>{2, 4, 7, 12, 20, 32});
    REQUIRE(got.tiles.size() == 32);

    // endpoints match to 1e-9 and the tiles partition [0, b^-6]
    std::vector<Rat> oracle_pts;
    for (const auto& t : st.tiles)
        for (auto [lo, hi] : t.pieces()) {
            oracle_pts.push_back(lo);
            oracle_pts.push_back(hi);
        }
    std::sort(oracle_pts.begin(), oracle_pts.end());
    oracle_pts.erase(std::unique(oracle_pts.begin(), oracle_pts.end()), oracle_pts.end());
    auto got_pts = sorted_endpoints(got.tiles);
    REQUIRE(got_pts.size() == oracle_pts.size());
    for (std::size_t i = 0; i < got_pts.size(); ++i)
        REQUIRE(got_pts[i] ==
                Catch::Approx(oracle_pts[i].convert_to<double>()).margin(1e-9));

    double bpow = std::pow(0.65, -6.0);
    REQUIRE(got_pts.front() == Catch::Approx(0.0).margin(1e-9));
    REQUIRE(got_pts.back() == Catch::Approx(bpow).margin(1e-9));
    // partition: union of tiles equals [0, b^-6] with no interior overlap
    IntervalSet uni;
    double overlap = 0;
    for (const auto& t : got.tiles) {
        overlap += uni.intersect(t.geometry.intervals().shrink(1e-9)).measure();
        uni = uni.unite(t.geometry.intervals());
    }
    REQUIRE(overlap <= 1e-7);
    uni = snap(uni, 1e-9);
    REQUIRE(uni.count() == 1);
    REQUIRE(uni.measure() == Catch::Approx(bpow).margin(1e-7));
}

TEST_CASE("rational instantiation of the 1-D engine matches the oracle exactly") {
    using Rat = boost::multiprecision::cpp_rational;
    std::vector<Affine1D<Rat>> maps{{Rat(13, 20), Rat(0)}, {Rat(13, 20), Rat(7, 20)}};
    IntervalSetT<Rat> A(Rat(0), Rat(1));
    std::vector<IntervalSetT<Rat>> mask{IntervalSetT<Rat>(Rat(0), Rat(13, 20)),
                                        IntervalSetT<Rat>(Rat(13, 20), Rat(1))};
    auto st = masked_tiling_1d<Rat>(maps, A, mask, [](int) { return 1; }, 4);

    oracle::MaskedOracle o;
    o.maps = {{Rat(13, 20), Rat(0)}, {Rat(13, 20), Rat(7, 20)}};
    o.attractor = oracle::Region::interval(0, 1);
    o.mask = {oracle::Region::interval(Rat(0), Rat(13, 20)),
              oracle::Region::interval(Rat(13, 20), Rat(1))};
    o.tiles = {o.attractor};
    for (int n = 1; n <= 4; ++n) oracle::step(o, 1, 1);

    REQUIRE(st.tiles.size() == o.tiles.size());
    std::vector<std::pair<Rat, Rat>> got, want;
    for (const auto& t : st.tiles)
        got.emplace_back(t.parts.front().first, t.parts.back().second);
    for (const auto& t : o.tiles) {
        auto p = t.pieces();
        want.emplace_back(p.front().first, p.back().second);
    }
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    REQUIRE(got == want);   // exact rational equality
}

TEST_CASE("masked recursion state invariants hold step by step") {
    Ifs F = overlap1d_ifs(0.65);
    auto theta = parse_infinite_word("(1)", 2);
    auto M = tops_mask(F, unit_interval());
    auto res = masked_tiling(F, unit_interval(), M, theta, 5);

    for (std::size_t n = 0; n < res.attractor_history.size(); ++n) {
        // A_n spans [0, b^-n]
        const auto& An = res.attractor_history[n].intervals();
        REQUIRE(An.lo() == Catch::Approx(0.0).margin(1e-9));
        REQUIRE(An.hi() == Catch::Approx(std::pow(0.65, -double(n))).margin(1e-7));
        // masks stay valid masks of A_n: cover and are disjoint
        IntervalSet uni;
        for (const auto& r : res.mask_history[n].regions) uni = uni.unite(r.intervals());
        REQUIRE(An.subtract(uni).shrink(1e-9).empty());
        auto inter = res.mask_history[n].regions[0].intervals().shrink(1e-9).intersect(
            res.mask_history[n].regions[1].intervals().shrink(1e-9));
        REQUIRE(inter.measure() <= 1e-9);
    }

    // tiles accumulate: every step-n tile appears in step n+1 (prop 3)
    for (std::size_t n = 0; n + 1 < res.tile_history.size(); ++n) {
        for (const auto& t : res.tile_history[n]) {
            bool found = false;
            for (const auto& u : res.tile_history[n + 1])
                if (hausdorff_distance(t.geometry, u.geometry) < 1e-9) {
                    found = true;
                    break;
                }
            REQUIRE(found);
        }
    }

    // tiles pairwise non-overlapping at every step
    for (const auto& tiles : res.tile_history) {
        for (std::size_t a = 0; a < tiles.size(); ++a)
            for (std::size_t b = a + 1; b < tiles.size(); ++b) {
                auto inter = tiles[a].geometry.intervals().shrink(1e-9).intersect(
                    tiles[b].geometry.intervals().shrink(1e-9));
                REQUIRE(inter.measure() <= 1e-9);
            }
    }
}

TEST_CASE("A_{n+1} is the attractor of the conjugated system F_{n+1}") {
    Ifs F = overlap1d_ifs(0.65);
    auto theta = parse_infinite_word("(1)", 2);
    auto M = tops_mask(F, unit_interval());
    auto res = masked_tiling(F, unit_interval(), M, theta, 4);
    // F_{n+1}(A_{n+1}) = A_{n+1}
    IntervalSet An = res.attractor.intervals();
    IntervalSet img;
    for (const auto& m : res.maps)
        img = img.unite(An.map(m.linear()(0, 0), m.offset()(0)));
    REQUIRE(hausdorff_1d(img, An) <= 1e-7);
}

TEST_CASE("2-D masked tiling of the b=0.65 square: top row matches the strip") {
    Ifs F2 = overlap2d_ifs(0.65);
    auto A2 = attractor_raster(F2, 48);
    auto M2 = tops_mask(F2, A2);
    auto theta = parse_infinite_word("(1)", 4);
    auto res2 = masked_tiling(F2, A2, M2, theta, 4);

    Ifs F1 = overlap1d_ifs(0.65);
    auto M1 = tops_mask(F1, unit_interval());
    auto res1 = masked_tiling(F1, unit_interval(), M1, parse_infinite_word("(1)", 2), 4);

    // tiles whose bbox touches the top edge y = b^-4 project to the 1-D tiles
    double top = std::pow(0.65, -4.0);
    double cell = 1.0 / 48.0;
    std::vector<std::pair<double, double>> strips;
    for (const auto& t : res2.tiles) {
        Box2 b = t.geometry.raster().tight_bbox();
        if (b.y1 >= top - 2 * cell) strips.emplace_back(b.x0, b.x1);
    }
    std::sort(strips.begin(), strips.end());
    std::vector<std::pair<double, double>> want;
    for (const auto& t : res1.tiles)
        want.emplace_back(t.geometry.intervals().lo(), t.geometry.intervals().hi());
    std::sort(want.begin(), want.end());
    REQUIRE(strips.size() == want.size());
    for (std::size_t i = 0; i < strips.size(); ++i) {
        REQUIRE(strips[i].first == Catch::Approx(want[i].first).margin(2.5 * cell));
        REQUIRE(strips[i].second == Catch::Approx(want[i].second).margin(2.5 * cell));
    }

    // and the masked tiles never overlap in their interiors
    for (std::size_t a = 0; a < res2.tiles.size(); ++a)
        for (std::size_t b = a + 1; b < res2.tiles.size(); ++b) {
            const Raster& ra = res2.tiles[a].geometry.raster();
            const Raster& rb = res2.tiles[b].geometry.raster();
            if (!ra.tight_bbox().overlaps(rb.tight_bbox())) continue;
            auto [ca, cb] = fractile::detail::common_grid(ra, rb);
            Raster inter = ca.eroded(1);
            inter &= cb.eroded(1);
            REQUIRE(inter.empty());
        }
}
