#pragma once

/// Euclidean similitudes x ↦ scale·Q·x + translation on ℝ^d.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace selfsim {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Similitude {
public:
    Similitude() = default;

    /// Throws std::invalid_argument when shapes disagree, scale ≤ 0, or Q is
    /// not orthogonal to `orth_tol`.
    Similitude(double scale, Matrix orthogonal, Point translation, double orth_tol = 1e-9)
        : scale_(scale), q_(std::move(orthogonal)), t_(std::move(translation)) {
        if (q_.rows() != q_.cols() || q_.rows() != t_.size())
            throw std::invalid_argument("similitude: orthogonal part and translation dimensions differ");
        if (!(scale_ > 0.0) || !std::isfinite(scale_))
            throw std::invalid_argument("similitude: scale must be positive");
        const double err = (q_.transpose() * q_ - Matrix::Identity(q_.rows(), q_.cols())).cwiseAbs().maxCoeff();
        if (err > orth_tol)
            throw std::invalid_argument("similitude: matrix is not orthogonal (error " + std::to_string(err) + ")");
    }

    /// Skips validation; for products of already validated maps.
    static Similitude trusted(double scale, Matrix orthogonal, Point translation) {
        Similitude f;
        f.scale_ = scale;
        f.q_ = std::move(orthogonal);
        f.t_ = std::move(translation);
        return f;
    }

    static Similitude identity(int dim) {
        return Similitude(1.0, Matrix::Identity(dim, dim), Point::Zero(dim));
    }

    /// Planar map with rotation by `angle_rad`, optionally preceded by the
    /// reflection (x, y) ↦ (x, −y).
    static Similitude planar(double scale, double angle_rad, bool reflect, const Point& translation) {
        Matrix q(2, 2);
        const double c = std::cos(angle_rad), s = std::sin(angle_rad);
        q << c, -s, s, c;
        if (reflect) {
            Matrix r(2, 2);
            r << 1, 0, 0, -1;
            q = q * r;
        }
        return Similitude(scale, q, translation);
    }

    int dim() const noexcept { return static_cast<int>(t_.size()); }
    double scale() const noexcept { return scale_; }
    const Matrix& orthogonal() const noexcept { return q_; }
    const Point& translation() const noexcept { return t_; }

    Point apply(const Point& x) const {
        if (x.size() != t_.size()) throw std::invalid_argument("similitude: point dimension mismatch");
        return scale_ * (q_ * x) + t_;
    }

    /// Solves (I − cQ)x = t.
    Point fixed_point() const {
        const Matrix a = Matrix::Identity(dim(), dim()) - scale_ * q_;
        return a.partialPivLu().solve(t_);
    }

private:
    double scale_ = 1.0;
    Matrix q_;
    Point t_;
};

inline void require_same_dim(const Similitude& f, const Similitude& g) {
    if (f.dim() != g.dim()) throw std::invalid_argument("similitude: dimension mismatch");
}

/// f∘g.
inline Similitude compose(const Similitude& f, const Similitude& g) {
    require_same_dim(f, g);
    return Similitude::trusted(f.scale() * g.scale(), f.orthogonal() * g.orthogonal(), f.apply(g.translation()));
}

/// g⁻¹∘f, so that compose(g, relative_map(f, g)) = f.
inline Similitude relative_map(const Similitude& f, const Similitude& g) {
    require_same_dim(f, g);
    const Matrix qgt = g.orthogonal().transpose();
    return Similitude::trusted(f.scale() / g.scale(), qgt * f.orthogonal(),
                               qgt * (f.translation() - g.translation()) / g.scale());
}

inline bool approx_equal(const Similitude& f, const Similitude& g, double tol) {
    require_same_dim(f, g);
    if (std::abs(f.scale() - g.scale()) > tol) return false;
    if ((f.orthogonal() - g.orthogonal()).cwiseAbs().maxCoeff() > tol) return false;
    return (f.translation() - g.translation()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace selfsim
