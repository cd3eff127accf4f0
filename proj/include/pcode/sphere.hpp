#pragma once

// Geometry of the round sphere S^d and its projective quotient RP^d:
// unit vectors, geodesic and projective (line-angle) distances, antipodes,
// diameters of finite point sets.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pcode/rng.hpp"

namespace pcode {

inline constexpr double kPi = 3.14159265358979323846;

inline double clamp_unit(double x) {
    return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x);
}

// A point of S^d, stored as a unit vector in R^{d+1}. Inputs are renormalized
// on construction (invariant: |norm - 1| <= 1e-12); the dimension d is carried
// explicitly so mixed-dimension arithmetic fails loudly.
struct SpherePoint {
    Eigen::VectorXd coords;
    int dim = 0;

    SpherePoint() = default;

    explicit SpherePoint(Eigen::VectorXd c) : coords(std::move(c)) {
        if (coords.size() < 2)
            throw std::invalid_argument("SpherePoint: need at least 2 coordinates (d >= 1)");
        const double n = coords.norm();
        if (!(n > 0.0) || !std::isfinite(n))
            throw std::invalid_argument("SpherePoint: cannot normalize zero or non-finite vector");
        coords /= n;
        dim = static_cast<int>(coords.size()) - 1;
    }
};

inline void check_same_dim(const SpherePoint& x, const SpherePoint& y, const char* where) {
    if (x.dim != y.dim)
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(x.dim) + " vs " + std::to_string(y.dim) + ")");
}

// Geodesic distance on S^d, in [0, pi]: arccos of the clamped inner product.
// Near +-1 the arccos form loses half the significant digits, so the chord
// form 2 asin(|x -+ y|/2) is used there; identical points give exactly 0.
inline double geodesic_distance(const SpherePoint& x, const SpherePoint& y) {
    check_same_dim(x, y, "geodesic_distance");
    const double c = x.coords.dot(y.coords);
    if (c > 0.9)
        return 2.0 * std::asin(std::min(1.0, 0.5 * (x.coords - y.coords).norm()));
    if (c < -0.9)
        return kPi - 2.0 * std::asin(std::min(1.0, 0.5 * (x.coords + y.coords).norm()));
    return std::acos(clamp_unit(c));
}

// Distance in RP^d between the lines spanned by x and y: the angle between
// the lines, in [0, pi/2]. Invariant under negating either argument.
inline double projective_distance(const SpherePoint& x, const SpherePoint& y) {
    check_same_dim(x, y, "projective_distance");
    const double c = x.coords.dot(y.coords);
    if (std::abs(c) > 0.9) {
        const Eigen::VectorXd nearer = c >= 0.0 ? (x.coords - y.coords).eval()
                                                : (x.coords + y.coords).eval();
        return 2.0 * std::asin(std::min(1.0, 0.5 * nearer.norm()));
    }
    return std::acos(clamp_unit(std::abs(c)));
}

inline SpherePoint antipode(const SpherePoint& x) {
    SpherePoint y = x;
    y.coords = -y.coords;
    return y;
}

// Nonempty ordered list of sphere points of one common dimension.
struct PointSet {
    std::vector<SpherePoint> points;

    explicit PointSet(std::vector<SpherePoint> pts) : points(std::move(pts)) {
        if (points.empty()) throw std::invalid_argument("PointSet: empty");
        for (const auto& p : points) check_same_dim(points.front(), p, "PointSet");
    }
};

inline double set_diameter(const std::vector<SpherePoint>& points) {
    if (points.empty()) throw std::invalid_argument("set_diameter: empty set");
    double diam = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            diam = std::max(diam, geodesic_distance(points[i], points[j]));
    return diam;
}

inline double set_diameter(const PointSet& a) { return set_diameter(a.points); }

// Normalized standard-Gaussian sample on S^d; deterministic for a fixed seed.
inline SpherePoint random_sphere_point(int d, std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("random_sphere_point: d must be >= 1");
    Rng rng(seed);
    Eigen::VectorXd v(d + 1);
    do {
        for (int i = 0; i <= d; ++i) v[i] = rng.normal();
    } while (v.norm() < 1e-12);
    return SpherePoint(std::move(v));
}

// Variant drawing from a live stream (used by solvers that consume many points).
inline SpherePoint random_sphere_point(int d, Rng& rng) {
    if (d < 1) throw std::invalid_argument("random_sphere_point: d must be >= 1");
    Eigen::VectorXd v(d + 1);
    do {
        for (int i = 0; i <= d; ++i) v[i] = rng.normal();
    } while (v.norm() < 1e-12);
    return SpherePoint(std::move(v));
}

// Point of S^1 at the given angle, with the identification S^1 = R/2piZ.
inline SpherePoint circle_point(double angle) {
    Eigen::VectorXd v(2);
    v << std::cos(angle), std::sin(angle);
    return SpherePoint(std::move(v));
}

inline double circle_angle(const SpherePoint& x) {
    if (x.dim != 1) throw std::invalid_argument("circle_angle: point is not on S^1");
    return std::atan2(x.coords[1], x.coords[0]);
}

} // namespace pcode
