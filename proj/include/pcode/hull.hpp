#pragma once

// Convex-hull membership certificates for the origin. The decision is solved
// by minimizing ||P lambda|| over the probability simplex with Frank-Wolfe
// away steps (exact line search); the certificate is then re-checked
// independently of the solver path:
//   inside  => convex weights with ||sum w_i p_i|| <= 1e-9, support <= n+1
//   outside => unit direction u with <u, p_i> >= margin > 0 for all i

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace pcode {

struct HullCertificate {
    bool inside = false;
    Eigen::VectorXd weights;   // on the simplex (inside certificates)
    Eigen::VectorXd direction; // unit separating direction (outside)
    double margin = 0.0;       // min_i <direction, p_i> when outside
    double residual = 0.0;     // ||sum w_i p_i|| when inside
};

namespace detail {

struct SimplexMinNorm {
    Eigen::VectorXd lambda; // simplex weights
    Eigen::VectorXd point;  // P lambda, the nearest hull point found
    bool separated = false; // stopped early on a positive separating direction
};

// min ||P lambda||^2 over the simplex; P has one point per column. With
// stop_at_separation, returns as soon as min_i <P lambda, p_i> > 0, which
// already certifies the origin outside (the norm is then not yet minimal).
inline SimplexMinNorm simplex_min_norm(const Eigen::MatrixXd& P, double target_norm = 1e-11,
                                       int max_iterations = 200000,
                                       bool stop_at_separation = false,
                                       const Eigen::VectorXd* warm = nullptr) {
    const int m = static_cast<int>(P.cols());
    Eigen::VectorXd lambda;
    if (warm != nullptr && warm->size() == m)
        lambda = *warm;
    else
        lambda = Eigen::VectorXd::Constant(m, 1.0 / m);

    SimplexMinNorm out;
    Eigen::VectorXd g = P * lambda;
    for (int it = 0; it < max_iterations; ++it) {
        if ((it & 1023) == 1023) g = P * lambda; // refresh against drift
        if (g.norm() <= target_norm) break;

        const Eigen::VectorXd d = P.transpose() * g; // half-gradient
        int s = 0, a = -1;
        for (int i = 1; i < m; ++i)
            if (d[i] < d[s]) s = i;
        for (int i = 0; i < m; ++i)
            if (lambda[i] > 0.0 && (a < 0 || d[i] > d[a])) a = i;

        if (stop_at_separation && d[s] > 0.0) {
            out.separated = true;
            break;
        }
        const double gg = g.squaredNorm();
        if (gg - d[s] <= 1e-16 * std::max(1.0, gg)) break; // Frank-Wolfe gap closed

        const double fw_desc = d[s] - gg;
        const double away_desc = (a >= 0) ? gg - d[a] : 0.0;
        const bool use_away = a >= 0 && lambda[a] < 1.0 && away_desc < fw_desc;

        Eigen::VectorXd h;
        double gamma_max;
        int idx;
        if (use_away) {
            idx = a;
            h = g - P.col(a); // motion of P lambda per unit step along lambda - e_a
            gamma_max = lambda[a] / (1.0 - lambda[a]);
        } else {
            idx = s;
            h = P.col(s) - g;
            gamma_max = 1.0;
        }
        const double hh = h.squaredNorm();
        if (hh <= 0.0) break;
        double gamma = -g.dot(h) / hh;
        if (gamma <= 0.0) break;
        if (gamma > gamma_max) gamma = gamma_max;

        if (use_away) {
            lambda *= (1.0 + gamma);
            lambda[idx] -= gamma;
            if (lambda[idx] < 1e-16) lambda[idx] = 0.0;
        } else {
            lambda *= (1.0 - gamma);
            lambda[idx] += gamma;
        }
        g += gamma * h;
    }

    out.lambda = std::move(lambda);
    out.point = P * out.lambda;
    return out;
}

// Caratheodory reduction: prune an inside witness to at most dim+1 support
// points by cancelling affine dependencies among the active columns.
inline void caratheodory_prune(const Eigen::MatrixXd& P, Eigen::VectorXd& lambda) {
    const int n = static_cast<int>(P.rows());
    for (;;) {
        std::vector<int> active;
        for (int i = 0; i < lambda.size(); ++i)
            if (lambda[i] > 0.0) active.push_back(i);
        if (static_cast<int>(active.size()) <= n + 1) return;

        Eigen::MatrixXd A(n + 1, active.size());
        for (std::size_t c = 0; c < active.size(); ++c) {
            A.block(0, static_cast<int>(c), n, 1) = P.col(active[c]);
            A(n, static_cast<int>(c)) = 1.0;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        lu.setThreshold(1e-12);
        const Eigen::MatrixXd kernel = lu.kernel();
        if (kernel.cols() == 0 || kernel.col(0).cwiseAbs().maxCoeff() < 1e-14) return;
        Eigen::VectorXd gamma = kernel.col(0);
        if (gamma.maxCoeff() <= 1e-14) gamma = -gamma; // need a positive entry

        double tau = -1.0;
        for (std::size_t c = 0; c < active.size(); ++c)
            if (gamma[static_cast<int>(c)] > 1e-14) {
                const double t = lambda[active[c]] / gamma[static_cast<int>(c)];
                if (tau < 0.0 || t < tau) tau = t;
            }
        if (tau < 0.0) return;
        for (std::size_t c = 0; c < active.size(); ++c) {
            lambda[active[c]] -= tau * gamma[static_cast<int>(c)];
            if (lambda[active[c]] < 1e-15) lambda[active[c]] = 0.0;
        }
        const double total = lambda.sum();
        if (total > 0.0) lambda /= total;
    }
}

inline Eigen::MatrixXd pack_columns(const std::vector<Eigen::VectorXd>& points, const char* where) {
    if (points.empty()) throw std::invalid_argument(std::string(where) + ": empty input");
    const int n = static_cast<int>(points.front().size());
    Eigen::MatrixXd P(n, points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != n) throw std::invalid_argument(std::string(where) + ": mixed dimensions");
        P.col(static_cast<int>(i)) = points[i];
    }
    return P;
}

} // namespace detail

// Exact decision with witness for 0 in conv(points).
inline HullCertificate origin_in_hull(const std::vector<Eigen::VectorXd>& points) {
    const Eigen::MatrixXd P = detail::pack_columns(points, "origin_in_hull");
    auto sol = detail::simplex_min_norm(P, 1e-11, 200000, /*stop_at_separation=*/true);

    HullCertificate cert;
    if (!sol.separated && sol.point.norm() <= 1e-9) {
        detail::caratheodory_prune(P, sol.lambda);
        cert.inside = true;
        cert.weights = sol.lambda;
        cert.residual = (P * sol.lambda).norm();
        // pruning is exact up to roundoff; re-polish on the reduced support if it drifted
        if (cert.residual > 1e-9) {
            auto polish = detail::simplex_min_norm(P, 1e-12, 200000, false, &cert.weights);
            cert.weights = polish.lambda;
            cert.residual = polish.point.norm();
        }
        return cert;
    }
    cert.inside = false;
    cert.direction = sol.point / sol.point.norm();
    cert.margin = 1e300;
    for (std::size_t i = 0; i < points.size(); ++i)
        cert.margin = std::min(cert.margin, cert.direction.dot(points[i]));
    if (cert.margin <= 0.0)
        throw std::runtime_error("origin_in_hull: unresolved near-boundary instance");
    return cert;
}

// Euclidean distance from the origin to conv(points).
inline double hull_distance(const std::vector<Eigen::VectorXd>& points) {
    const Eigen::MatrixXd P = detail::pack_columns(points, "hull_distance");
    return detail::simplex_min_norm(P).point.norm();
}

} // namespace pcode
