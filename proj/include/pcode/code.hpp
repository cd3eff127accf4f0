#pragma once

// Projective codes: sets of lines through the origin of R^{d+1} (points of
// RP^d) with a certified minimal pairwise angle. Explicit constructions
// (hypercube, integer lattice shells, 600-cell, icosahedron, equally spaced
// lines on RP^1) and a multi-restart soft-min packing search. Every code this
// module hands out is a lower-bound witness: the cached min_distance is
// always recomputable from the representatives.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "pcode/search.hpp"
#include "pcode/sphere.hpp"

namespace pcode {

// One representative per line, all of one dimension, plus the certified
// minimal pairwise projective distance.
struct ProjectiveCode {
    int dim = 0;                     // lines live in RP^dim
    std::vector<SpherePoint> lines;  // canonical representatives
    double min_distance = 0.0;       // certificate; recomputable
};

// Representative with its first coordinate of magnitude > 1e-9 made
// positive, so codes serialize deterministically.
inline SpherePoint canonicalize_line(const SpherePoint& x) {
    for (int i = 0; i <= x.dim; ++i) {
        if (std::abs(x.coords[i]) > 1e-9) {
            if (x.coords[i] < 0.0) return antipode(x);
            return x;
        }
    }
    return x;
}

inline double min_distance(const ProjectiveCode& code) {
    if (code.lines.size() < 2)
        throw std::invalid_argument("min_distance: need at least 2 lines");
    double best = kPi;
    for (std::size_t i = 0; i < code.lines.size(); ++i)
        for (std::size_t j = i + 1; j < code.lines.size(); ++j)
            best = std::min(best, projective_distance(code.lines[i], code.lines[j]));
    return best;
}

// Builds a certified code from representatives. Unless allow_degenerate is
// set, rejects duplicated lines.
inline ProjectiveCode make_code(std::vector<SpherePoint> lines, bool allow_degenerate = false) {
    if (lines.empty()) throw std::invalid_argument("make_code: empty line set");
    for (auto& x : lines) x = canonicalize_line(x);
    ProjectiveCode code;
    code.dim = lines.front().dim;
    for (const auto& x : lines) check_same_dim(lines.front(), x, "make_code");
    code.lines = std::move(lines);
    code.min_distance = code.lines.size() >= 2 ? min_distance(code) : kPi / 2.0;
    if (!allow_degenerate && code.lines.size() >= 2 && code.min_distance <= 0.0)
        throw std::invalid_argument("make_code: duplicated line (degenerate code)");
    return code;
}

// Lines through the vertices of the hypercube {-1,1}^d: 2^{d-1} lines in
// RP^{d-1} whose exact minimal angle is arccos(1 - 2/d).
inline ProjectiveCode hypercube_code(int d) {
    if (d < 2) throw std::invalid_argument("hypercube_code: d must be >= 2");
    if (d > 20) throw std::invalid_argument("hypercube_code: d > 20 (2^{d-1} lines)");
    std::vector<SpherePoint> lines;
    const std::uint32_t count = 1u << (d - 1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::uint32_t mask = 0; mask < count; ++mask) {
        Eigen::VectorXd v(d);
        v[0] = scale; // fix the first coordinate positive: one vector per line
        for (int i = 1; i < d; ++i) v[i] = (mask >> (i - 1)) & 1u ? -scale : scale;
        lines.emplace_back(std::move(v));
    }
    return make_code(std::move(lines));
}

struct LatticeCodeInfo {
    ProjectiveCode code;
    int shell_norm = 0;  // selected squared norm r
    int point_count = 0; // |S_r| (points; lines come in antipodal pairs)
};

// Integer points x with |x_i| <= n bucketed by squared norm r; the largest
// bucket (ties to larger r) yields a code with min angle >= arccos(1 - 1/r)
// >= arccos(1 - 1/(d n^2)).
inline LatticeCodeInfo lattice_code_info(int d, int n) {
    if (d < 2) throw std::invalid_argument("lattice_code: d must be >= 2");
    if (n < 1) throw std::invalid_argument("lattice_code: n must be >= 1");
    double budget = 1.0;
    for (int i = 0; i < d; ++i) budget *= 2 * n + 1;
    if (budget > 1e7) throw std::invalid_argument("lattice_code: enumeration budget exceeded ((2n+1)^d > 1e7)");

    const int rmax = d * n * n;
    std::vector<std::vector<Eigen::VectorXd>> buckets(rmax + 1);
    Eigen::VectorXd x = Eigen::VectorXd::Constant(d, -n);
    while (true) {
        int r = 0;
        for (int i = 0; i < d; ++i) r += static_cast<int>(x[i] * x[i]);
        if (r >= 1) buckets[r].push_back(x);
        int i = 0;
        while (i < d && x[i] == n) x[i++] = -n;
        if (i == d) break;
        x[i] += 1;
    }

    int best_r = 1;
    for (int r = 1; r <= rmax; ++r)
        if (buckets[r].size() >= buckets[best_r].size()) best_r = r; // ties: larger r

    LatticeCodeInfo info;
    info.shell_norm = best_r;
    info.point_count = static_cast<int>(buckets[best_r].size());
    std::vector<SpherePoint> lines;
    for (const auto& p : buckets[best_r]) {
        SpherePoint cand = canonicalize_line(SpherePoint(p));
        bool seen = false;
        for (const auto& q : lines)
            if ((q.coords - cand.coords).norm() < 1e-9) { seen = true; break; }
        if (!seen) lines.push_back(std::move(cand));
    }
    info.code = make_code(std::move(lines));
    return info;
}

inline ProjectiveCode lattice_code(int d, int n) { return lattice_code_info(d, n).code; }

// 60 lines in RP^3 from the 120 vertices of the 600-cell; minimal angle pi/5.
inline ProjectiveCode cell600_code() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::VectorXd> verts;
    auto push = [&](double a, double b, double c, double d) {
        Eigen::VectorXd v(4);
        v << a, b, c, d;
        verts.push_back(std::move(v));
    };
    // 8 unit axis vectors
    for (int i = 0; i < 4; ++i)
        for (int s : {1, -1}) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
            v[i] = s;
            verts.push_back(std::move(v));
        }
    // 16 half-integer vectors
    for (int m = 0; m < 16; ++m)
        push((m & 1 ? -.5 : .5), (m & 2 ? -.5 : .5), (m & 4 ? -.5 : .5), (m & 8 ? -.5 : .5));
    // 96 even permutations of (+-phi, +-1, +-1/phi, 0)/2
    const int even_perms[12][4] = {{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {1, 0, 3, 2},
                                   {1, 2, 0, 3}, {1, 3, 2, 0}, {2, 0, 1, 3}, {2, 1, 3, 0},
                                   {2, 3, 0, 1}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 2, 1, 0}};
    for (const auto& perm : even_perms)
        for (int m = 0; m < 8; ++m) {
            const double vals[4] = {(m & 1 ? -phi : phi) / 2.0, (m & 2 ? -1.0 : 1.0) / 2.0,
                                    (m & 4 ? -1.0 / phi : 1.0 / phi) / 2.0, 0.0};
            Eigen::VectorXd v(4);
            for (int i = 0; i < 4; ++i) v[perm[i]] = vals[i];
            verts.push_back(std::move(v));
        }

    std::vector<SpherePoint> lines;
    for (const auto& v : verts) {
        SpherePoint cand = canonicalize_line(SpherePoint(v));
        bool seen = false;
        for (const auto& q : lines)
            if ((q.coords - cand.coords).norm() < 1e-9) { seen = true; break; }
        if (!seen) lines.push_back(std::move(cand));
    }
    return make_code(std::move(lines));
}

// The six equiangular lines of the icosahedron in RP^2, pairwise at angle
// arccos(1/sqrt 5).
inline ProjectiveCode icosahedron_code() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<SpherePoint> lines;
    auto push = [&](double a, double b, double c) {
        Eigen::VectorXd v(3);
        v << a, b, c;
        lines.push_back(canonicalize_line(SpherePoint(std::move(v))));
    };
    push(0, 1, phi);
    push(0, 1, -phi);
    push(1, phi, 0);
    push(1, -phi, 0);
    push(phi, 0, 1);
    push(-phi, 0, 1);
    return make_code(std::move(lines));
}

// n equally spaced lines on RP^1 (the circle of circumference pi); the
// minimal angle pi/n is optimal by pigeonhole.
inline ProjectiveCode circle_code(int n) {
    if (n < 2) throw std::invalid_argument("circle_code: n must be >= 2");
    std::vector<SpherePoint> lines;
    for (int k = 0; k < n; ++k) lines.push_back(circle_point(k * kPi / n));
    return make_code(std::move(lines));
}

inline double thickening_scale(const ProjectiveCode& code) {
    if (code.lines.size() < 2)
        throw std::invalid_argument("thickening_scale: need at least 2 lines");
    return kPi - min_distance(code);
}

// Asymptotic packing reference arccos(2 sqrt(k+1) / d), the limit shape with
// the vanishing correction dropped. For reporting only, never a certificate.
inline double bukh_cox_reference(int d, int k) {
    if (d < 1 || k < 1) throw std::invalid_argument("bukh_cox_reference: d, k must be >= 1");
    const double arg = 2.0 * std::sqrt(static_cast<double>(k) + 1.0) / d;
    if (arg > 1.0)
        throw std::invalid_argument("bukh_cox_reference: 2 sqrt(k+1)/d exceeds 1 (d too small)");
    return std::acos(arg);
}

namespace detail {

// Soft-min packing objective over pairwise projective distances at sharpness
// beta, with its ascent direction. Returns the soft-min value.
inline double packing_softmin_grad(const std::vector<Eigen::VectorXd>& pts, double beta,
                                   std::vector<Eigen::VectorXd>& grad) {
    const std::size_t n = pts.size();
    std::vector<double> theta;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    double tmin = kPi;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = pts[i].dot(pts[j]);
            const double t = std::acos(clamp_unit(std::abs(c)));
            theta.push_back(t);
            pairs.emplace_back(i, j);
            tmin = std::min(tmin, t);
        }
    double z = 0.0;
    std::vector<double> w(theta.size());
    for (std::size_t p = 0; p < theta.size(); ++p) {
        w[p] = std::exp(-beta * (theta[p] - tmin));
        z += w[p];
    }
    for (auto& wi : w) wi /= z;

    grad.assign(n, Eigen::VectorXd::Zero(pts.front().size()));
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        const double c = pts[i].dot(pts[j]);
        const double s = std::sqrt(std::max(1.0 - c * c, 1e-16));
        // d/dx_i acos|<x_i,x_j>| = -sign(c) x_j / sqrt(1-c^2), tangentially
        const double f = -((c >= 0.0) ? 1.0 : -1.0) / s;
        grad[i] += w[p] * f * pts[j];
        grad[j] += w[p] * f * pts[i];
    }
    for (std::size_t i = 0; i < n; ++i) grad[i] = tangent_project(pts[i], grad[i]);
    return tmin - std::log(z) / beta;
}

// Subgradient polish on the exact min: push apart only the pairs within eps
// of the current minimum.
inline void packing_maximin_polish(std::vector<Eigen::VectorXd>& pts, int iterations) {
    const std::size_t n = pts.size();
    double step = 0.02;
    for (int it = 0; it < iterations; ++it) {
        double tmin = kPi;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                tmin = std::min(tmin, std::acos(clamp_unit(std::abs(pts[i].dot(pts[j])))));
        std::vector<Eigen::VectorXd> g(n, Eigen::VectorXd::Zero(pts.front().size()));
        const double eps = std::max(1e-7, 0.05 * step);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double c = pts[i].dot(pts[j]);
                const double t = std::acos(clamp_unit(std::abs(c)));
                if (t > tmin + eps) continue;
                const double s = std::sqrt(std::max(1.0 - c * c, 1e-16));
                const double f = -((c >= 0.0) ? 1.0 : -1.0) / s;
                g[i] += f * pts[j];
                g[j] += f * pts[i];
            }
        for (std::size_t i = 0; i < n; ++i) {
            Eigen::VectorXd t = tangent_project(pts[i], g[i]);
            if (t.norm() > 1.0) t /= t.norm();
            pts[i] = sphere_step(pts[i], t, step);
        }
        step *= 0.995;
    }
}

} // namespace detail

// Multi-restart soft-min ascent for n lines in RP^d. The returned code is
// re-certified by an exact pairwise pass, so whatever the search did, the
// result is a valid lower-bound witness for the packing problem.
inline ProjectiveCode search_code(int d, int n, const SearchOptions& opts = {}) {
    if (d < 1) throw std::invalid_argument("search_code: d must be >= 1");
    if (n < 2) throw std::invalid_argument("search_code: n must be >= 2");
    opts.validate();

    std::vector<SpherePoint> best_lines;
    double best_value = -1.0;
    int best_restart = -1;

    const double beta_final = 1e3;
    const int stages = 5;

    for (int restart = 0; restart < opts.restarts; ++restart) {
        Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(restart)));
        std::vector<Eigen::VectorXd> pts;
        pts.reserve(n);
        for (int i = 0; i < n; ++i) pts.push_back(random_sphere_point(d, rng).coords);

        double beta = opts.smoothing;
        const double beta_mul = std::pow(beta_final / opts.smoothing, 1.0 / (stages - 1));
        const int iters_per_stage = std::max(1, opts.max_iterations / stages);
        std::vector<Eigen::VectorXd> grad;

        for (int stage = 0; stage < stages; ++stage) {
            AdaptiveStep step(opts.step_initial / (1.0 + stage), opts.step_floor);
            double value = detail::packing_softmin_grad(pts, beta, grad);
            for (int it = 0; it < iters_per_stage; ++it) {
                std::vector<Eigen::VectorXd> trial(pts.size());
                for (std::size_t i = 0; i < pts.size(); ++i)
                    trial[i] = sphere_step(pts[i], grad[i], step.step);
                std::vector<Eigen::VectorXd> trial_grad;
                const double trial_value = detail::packing_softmin_grad(trial, beta, trial_grad);
                if (trial_value >= value) {
                    pts.swap(trial);
                    grad.swap(trial_grad);
                    value = trial_value;
                    step.accept();
                } else {
                    step.reject();
                    if (step.step <= step.floor * 2.0) break;
                }
            }
            beta *= beta_mul;
        }
        detail::packing_maximin_polish(pts, 400);

        std::vector<SpherePoint> lines;
        lines.reserve(pts.size());
        for (auto& p : pts) lines.push_back(canonicalize_line(SpherePoint(p)));
        double value = kPi;
        for (std::size_t i = 0; i < lines.size(); ++i)
            for (std::size_t j = i + 1; j < lines.size(); ++j)
                value = std::min(value, projective_distance(lines[i], lines[j]));
        if (value > best_value) {
            best_value = value;
            best_lines = std::move(lines);
            best_restart = restart;
        }
    }
    (void)best_restart;
    return make_code(std::move(best_lines), /*allow_degenerate=*/true);
}

// Best certified lower bound for the n-line packing distance in RP^d from
// the explicit constructions (exact on RP^1 by pigeonhole), falling back to
// a short search. Conservative by construction.
inline double packing_lower_bound(int d, int n, std::uint64_t seed = 7) {
    if (d < 1 || n < 1) throw std::invalid_argument("packing_lower_bound: d, n must be >= 1");
    if (n == 1) return kPi; // a single line; vacuous packing
    if (d == 1) return kPi / n;
    if (n <= d + 1) return kPi / 2.0; // subset of an orthonormal basis
    if (d == 2 && n <= 6) return std::acos(1.0 / std::sqrt(5.0));
    if (d == 3 && n <= 60) return kPi / 5.0;
    SearchOptions opts;
    opts.restarts = 12;
    opts.max_iterations = 2500;
    opts.seed = seed;
    return search_code(d, n, opts).min_distance;
}

} // namespace pcode
