#pragma once

// Shared knobs and helpers for the multi-restart projected-gradient solvers
// (code search, zero capture, mass partition). Sphere points are optimized in
// ambient coordinates and renormalized after each step; restarts use
// counter-derived seeds so they are order-independent.

#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

#include "pcode/sphere.hpp"

namespace pcode {

struct SearchOptions {
    int restarts = 32;
    int max_iterations = 6000; // per restart, across anneal stages
    double smoothing = 10.0;   // initial soft-min sharpness beta
    double step_initial = 0.3;
    double step_floor = 1e-10;
    std::uint64_t seed = 1;

    void validate() const {
        if (restarts < 1) throw std::invalid_argument("SearchOptions: restarts must be >= 1");
        if (max_iterations < 1) throw std::invalid_argument("SearchOptions: max_iterations must be >= 1");
        if (!(smoothing > 0.0)) throw std::invalid_argument("SearchOptions: smoothing must be > 0");
        if (!(step_initial > 0.0)) throw std::invalid_argument("SearchOptions: step size must be > 0");
    }
};

// Component of g orthogonal to the unit vector x.
inline Eigen::VectorXd tangent_project(const Eigen::VectorXd& x, const Eigen::VectorXd& g) {
    return g - x.dot(g) * x;
}

inline Eigen::VectorXd sphere_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dir, double step) {
    Eigen::VectorXd y = x + step * dir;
    const double n = y.norm();
    if (n < 1e-14) return x; // pathological step through the origin; stay put
    return y / n;
}

// Multiplicative step-size controller: shrink on rejected steps, creep back
// up on accepted ones.
struct AdaptiveStep {
    double step;
    double floor;
    double ceil;

    explicit AdaptiveStep(double s0, double lo = 1e-10, double hi = 1.0)
        : step(s0), floor(lo), ceil(hi) {}

    void accept() { step = std::min(step * 1.05, ceil); }
    void reject() { step = std::max(step * 0.5, floor); }
};

} // namespace pcode
