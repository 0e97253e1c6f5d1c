#pragma once

// Built-in systems: every worked example lives here so the CLI and the tests
// drive identical data.

#include <array>
#include <cmath>
#include <optional>

#include "fractile/ifs.hpp"

namespace fractile {

// {x/2, x/2 + 1/2} with attractor [0,1]
inline Ifs interval_ifs() {
    return Ifs(1, {MapSpec::affine1(0.5, 0.0), MapSpec::affine1(0.5, 0.5)});
}

// L-shaped ("chair") attractor: [0,1]^2 minus the open top-right quadrant
inline Ifs chair_ifs() {
    return Ifs(2, {
                      MapSpec::affine2(0.5, 0.0, 0.0, 0.5, 0.0, 0.0),
                      MapSpec::affine2(0.5, 0.0, 0.0, 0.5, 0.25, 0.25),
                      MapSpec::affine2(-0.5, 0.0, 0.0, 0.5, 1.0, 0.0),
                      MapSpec::affine2(0.5, 0.0, 0.0, -0.5, 0.0, 1.0),
                  });
}

// vertices of the chair attractor (hexagon), for exact polygon rendering
inline std::vector<Vec> chair_polygon() {
    return {vec2(0, 0), vec2(1, 0), vec2(1, 0.5), vec2(0.5, 0.5), vec2(0.5, 1), vec2(0, 1)};
}

// Fold-out square: E interior to the unit square, P,Q,R,S its projections on
// the sides; the four maps send the square to the four rectangles around E
// with orientations folding at the shared edges.
inline Ifs foldout_ifs(double e1, double e2) {
    if (!(e1 > 0 && e1 < 1 && e2 > 0 && e2 < 1))
        throw config_error("foldout: E must be interior to the unit square");
    return Ifs(2, {
                      MapSpec::affine2(e1, 0, 0, e2, 0, 0),
                      MapSpec::affine2(e1 - 1, 0, 0, e2, 1, 0),
                      MapSpec::affine2(e1 - 1, 0, 0, e2 - 1, 1, 1),
                      MapSpec::affine2(e1, 0, 0, e2 - 1, 0, 1),
                  });
}

inline std::vector<Vec> square_polygon() {
    return {vec2(0, 0), vec2(1, 0), vec2(1, 1), vec2(0, 1)};
}

// Triangle IFS: c on AB, a on BC, b on CA; f1(ABC)=Abc, f2(ABC)=aBc,
// f3(ABC)=abC, f4(ABC)=abc. Attractor = filled triangle ABC.
struct TrianglePresetParams {
    Vec A, B, C, a, b, c;
};

inline TrianglePresetParams triangle_default_params() {
    TrianglePresetParams p;
    p.A = vec2(0, 0);
    p.B = vec2(1, 0);
    p.C = vec2(0, 1);
    p.a = 0.5 * (p.B + p.C);
    p.b = 0.5 * (p.C + p.A);
    p.c = 0.5 * (p.A + p.B);
    return p;
}

// unique affine map sending triangle (p1,p2,p3) -> (q1,q2,q3)
inline MapSpec affine_from_triangles(const Vec& p1, const Vec& p2, const Vec& p3, const Vec& q1,
                                     const Vec& q2, const Vec& q3) {
    Mat P(2, 2), Q(2, 2);
    P.col(0) = p2 - p1;
    P.col(1) = p3 - p1;
    Q.col(0) = q2 - q1;
    Q.col(1) = q3 - q1;
    Mat L = Q * P.inverse();
    return MapSpec::affine(L, q1 - L * p1);
}

inline Ifs triangle_ifs(const TrianglePresetParams& p = triangle_default_params()) {
    return Ifs(2, {
                      affine_from_triangles(p.A, p.B, p.C, p.A, p.b, p.c),
                      affine_from_triangles(p.A, p.B, p.C, p.a, p.B, p.c),
                      affine_from_triangles(p.A, p.B, p.C, p.a, p.b, p.C),
                      affine_from_triangles(p.A, p.B, p.C, p.a, p.b, p.c),
                  });
}

inline std::vector<Vec> triangle_polygon(const TrianglePresetParams& p = triangle_default_params()) {
    return {p.A, p.B, p.C};
}

// equilateral Sierpinski gasket, ratio 1/2
inline Ifs sierpinski_ifs() {
    const double h = std::sqrt(3.0) / 2.0;
    return Ifs(2, {
                      MapSpec::affine2(0.5, 0, 0, 0.5, 0, 0),
                      MapSpec::affine2(0.5, 0, 0, 0.5, 0.5, 0),
                      MapSpec::affine2(0.5, 0, 0, 0.5, 0.25, h / 2),
                  });
}

// three-map IFS with empty-interior attractor (coefficients as published)
inline Ifs empty_interior_ifs() {
    return Ifs(2, {
                      MapSpec::affine2(-0.7, 0.0, 0.0, 0.65, 0.7, 0.35),
                      MapSpec::affine2(0.0, -0.3, -0.6, -0.3, 1.0, 1.3),
                      MapSpec::affine2(0.0, 0.375, -0.6, 0.35, 0.325, 0.65),
                  });
}

// overlapping pair {bx, bx + (1-b)} on [0,1]; overlapping when b > 1/2
inline Ifs overlap1d_ifs(double b = 0.65) {
    if (!(b > 0 && b < 1)) throw config_error("overlap1d: b must be in (0,1)");
    return Ifs(1, {MapSpec::affine1(b, 0.0), MapSpec::affine1(b, 1.0 - b)});
}

// the 2-D product family with l = 1-b; attractor [0,1]^2
inline Ifs overlap2d_ifs(double b = 0.65) {
    if (!(b > 0 && b < 1)) throw config_error("overlap2d: b must be in (0,1)");
    double l = 1.0 - b;
    return Ifs(2, {
                      MapSpec::affine2(b, 0, 0, b, 0, 0),
                      MapSpec::affine2(b, 0, 0, b, l, 0),
                      MapSpec::affine2(b, 0, 0, b, 0, l),
                      MapSpec::affine2(b, 0, 0, b, l, l),
                  });
}

// Digit IFS f_i(x) = L^-1 (x - d_i). Validates |D| = |det L| and that the
// digits are pairwise distinct coset representatives mod L Z^n.
inline Ifs digit_ifs(const Mat& L, const std::vector<Vec>& digits) {
    int n = int(L.rows());
    if (L.cols() != n) throw config_error("digit: L must be square");
    double det = L.determinant();
    if (std::abs(std::abs(det) - std::round(std::abs(det))) > 1e-9 || std::abs(det) < 0.5)
        throw config_error("digit: L must be a nonsingular integer matrix");
    if (double(digits.size()) != std::round(std::abs(det)))
        throw config_error("digit: |D| must equal |det L|");
    Mat Li = L.inverse();
    for (std::size_t i = 0; i < digits.size(); ++i)
        for (std::size_t j = i + 1; j < digits.size(); ++j) {
            Vec v = Li * (digits[i] - digits[j]);
            bool integral = true;
            for (int k = 0; k < n; ++k)
                if (std::abs(v(k) - std::round(v(k))) > 1e-9) integral = false;
            if (integral)
                throw config_error("digit: digits " + std::to_string(i + 1) + " and " +
                                   std::to_string(j + 1) + " lie in the same coset mod L");
        }
    std::vector<MapSpec> maps;
    maps.reserve(digits.size());
    for (const auto& d : digits) maps.push_back(MapSpec::affine(Li, -Li * d));
    return Ifs(n, std::move(maps));
}

inline Ifs twindragon_ifs() {
    Mat L(2, 2);
    L << 1, -1, 1, 1;
    return digit_ifs(L, {vec2(0, 0), vec2(1, 0)});
}

} // namespace fractile
