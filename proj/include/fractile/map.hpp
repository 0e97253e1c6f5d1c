#pragma once

// Invertible affine and projective self-maps of R^n, the atoms every tile
// transform is composed from. Affine maps are stored as (linear, offset);
// projective maps as a homogeneous (n+1)x(n+1) matrix normalized on apply.

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "fractile/common.hpp"

namespace fractile {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

inline Vec vec1(double x) {
    Vec v(1);
    v << x;
    return v;
}

class MapSpec {
public:
    enum class Kind { Affine, Projective };

    static MapSpec affine(Mat linear, Vec offset) {
        if (linear.rows() != linear.cols() || linear.rows() != offset.size())
            throw dim_mismatch_error("affine map: linear must be dim x dim and offset dim");
        MapSpec m;
        m.kind_ = Kind::Affine;
        m.dim_ = static_cast<int>(linear.rows());
        m.a_ = std::move(linear);
        m.b_ = std::move(offset);
        if (std::abs(m.a_.determinant()) < 1e-15)
            throw numeric_error("affine map: singular linear part");
        return m;
    }

    // 1-D affine x -> a*x + c
    static MapSpec affine1(double a, double c) {
        Mat l(1, 1);
        l << a;
        return affine(l, vec1(c));
    }

    // 2-D affine (x,y) -> (a x + b y + e, c x + d y + f)
    static MapSpec affine2(double a, double b, double c, double d, double e, double f) {
        Mat l(2, 2);
        l << a, b, c, d;
        return affine(l, vec2(e, f));
    }

    static MapSpec projective(Mat hom) {
        if (hom.rows() != hom.cols() || hom.rows() < 2)
            throw dim_mismatch_error("projective map: homogeneous matrix must be (dim+1) square");
        MapSpec m;
        m.kind_ = Kind::Projective;
        m.dim_ = static_cast<int>(hom.rows()) - 1;
        m.a_ = std::move(hom);
        if (std::abs(m.a_.determinant()) < 1e-15)
            throw numeric_error("projective map: singular matrix");
        return m;
    }

    static MapSpec identity(int dim) {
        return affine(Mat::Identity(dim, dim), Vec::Zero(dim));
    }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool is_affine() const { return kind_ == Kind::Affine; }
    const Mat& linear() const { return a_; }    // affine: linear part; projective: hom matrix
    const Vec& offset() const { return b_; }    // affine only

    Vec apply(const Vec& x) const {
        if (x.size() != dim_) throw dim_mismatch_error("apply: point dim mismatch");
        if (kind_ == Kind::Affine) return a_ * x + b_;
        Vec h(dim_ + 1);
        h.head(dim_) = x;
        h(dim_) = 1.0;
        Vec y = a_ * h;
        double w = y(dim_);
        if (std::abs(w) < 1e-12)
            throw numeric_error("projective apply: point maps to the line at infinity");
        return y.head(dim_) / w;
    }

    // 2-D fast path used by rasterizers; valid for dim()==2.
    void apply2(double x, double y, double& ox, double& oy) const {
        if (kind_ == Kind::Affine) {
            ox = a_(0, 0) * x + a_(0, 1) * y + b_(0);
            oy = a_(1, 0) * x + a_(1, 1) * y + b_(1);
            return;
        }
        double hx = a_(0, 0) * x + a_(0, 1) * y + a_(0, 2);
        double hy = a_(1, 0) * x + a_(1, 1) * y + a_(1, 2);
        double hw = a_(2, 0) * x + a_(2, 1) * y + a_(2, 2);
        if (std::abs(hw) < 1e-12)
            throw numeric_error("projective apply: point maps to the line at infinity");
        ox = hx / hw;
        oy = hy / hw;
    }

    double apply1(double x) const {
        if (kind_ == Kind::Affine) return a_(0, 0) * x + b_(0);
        double h = a_(0, 0) * x + a_(0, 1);
        double w = a_(1, 0) * x + a_(1, 1);
        if (std::abs(w) < 1e-12)
            throw numeric_error("projective apply: point maps to the line at infinity");
        return h / w;
    }

    MapSpec inverse() const {
        MapSpec m;
        m.kind_ = kind_;
        m.dim_ = dim_;
        if (kind_ == Kind::Affine) {
            Mat li = a_.inverse();
            m.a_ = li;
            m.b_ = -li * b_;
        } else {
            m.a_ = a_.inverse();
        }
        return m;
    }

    // Composition this o rhs (apply rhs first).
    MapSpec compose(const MapSpec& rhs) const {
        if (dim_ != rhs.dim_) throw dim_mismatch_error("compose: dim mismatch");
        MapSpec m;
        m.dim_ = dim_;
        if (kind_ == Kind::Affine && rhs.kind_ == Kind::Affine) {
            m.kind_ = Kind::Affine;
            m.a_ = a_ * rhs.a_;
            m.b_ = a_ * rhs.b_ + b_;
        } else {
            m.kind_ = Kind::Projective;
            m.a_ = homogeneous() * rhs.homogeneous();
        }
        return m;
    }

    Mat homogeneous() const {
        if (kind_ == Kind::Projective) return a_;
        Mat h = Mat::Zero(dim_ + 1, dim_ + 1);
        h.topLeftCorner(dim_, dim_) = a_;
        h.topRightCorner(dim_, 1) = b_;
        h(dim_, dim_) = 1.0;
        return h;
    }

    // Largest singular value of the linear part (affine); for projective maps a
    // sampled local Lipschitz estimate over the given window is used instead.
    double lipschitz_estimate(const Vec& window_lo = Vec(), const Vec& window_hi = Vec()) const {
        if (kind_ == Kind::Affine) {
            Eigen::JacobiSVD<Mat> svd(a_);
            return svd.singularValues()(0);
        }
        Vec lo = window_lo.size() == dim_ ? window_lo : Vec::Constant(dim_, -1.0);
        Vec hi = window_hi.size() == dim_ ? window_hi : Vec::Constant(dim_, 1.0);
        const int samples = 9;
        const double h = 1e-6;
        double best = 0.0;
        Vec x(dim_);
        for (int s = 0; s < samples * samples; ++s) {
            for (int d = 0; d < dim_; ++d) {
                int idx = (d == 0) ? s % samples : (s / samples) % samples;
                x(d) = lo(d) + (hi(d) - lo(d)) * (idx + 0.5) / samples;
            }
            Mat jac(dim_, dim_);
            bool ok = true;
            Vec fx;
            try {
                fx = apply(x);
                for (int d = 0; d < dim_; ++d) {
                    Vec xp = x;
                    xp(d) += h;
                    jac.col(d) = (apply(xp) - fx) / h;
                }
            } catch (const numeric_error&) {
                ok = false;
            }
            if (!ok) continue;
            Eigen::JacobiSVD<Mat> svd(jac);
            best = std::max(best, svd.singularValues()(0));
        }
        return best;
    }

    // Max |difference| of matrix representations, after scale normalization for
    // projective pairs. Used by tests and canonical-key cross checks.
    double distance(const MapSpec& rhs) const {
        if (dim_ != rhs.dim_) return std::numeric_limits<double>::infinity();
        Mat x = homogeneous(), y = rhs.homogeneous();
        x /= x.norm();
        y /= y.norm();
        return std::min((x - y).cwiseAbs().maxCoeff(), (x + y).cwiseAbs().maxCoeff());
    }

private:
    Kind kind_ = Kind::Affine;
    int dim_ = 0;
    Mat a_;
    Vec b_;
};

} // namespace fractile
