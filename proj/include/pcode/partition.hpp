#pragma once

// Mass partition solvers over weighted point clouds: classical ham sandwich
// (d masses, one hyperplane through the origin), halving direction sets for
// n > d masses, and the log-bundle equipartition (horizontal cut times plus
// per-slab halfspace cuts). Atoms sitting exactly on a hyperplane split
// half-half to both sides, which makes the bisection residual exactly odd
// and lets the zero-capture reduction apply. Solvers descend a
// sigmoid-smoothed surrogate and are verified with exact indicators;
// tolerances floor at the largest single atom weight.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "pcode/capture.hpp"
#include "pcode/search.hpp"
#include "pcode/sphere.hpp"

namespace pcode {

// Weighted atoms in R^k (k = d+1 for sphere masses, unit-ball points for
// disk masses).
struct Mass {
    Eigen::MatrixXd points; // one atom per row
    Eigen::VectorXd weights;
    double total = 0.0;
};

inline Mass make_mass(Eigen::MatrixXd points, Eigen::VectorXd weights) {
    if (points.rows() == 0 || points.rows() != weights.size())
        throw std::invalid_argument("make_mass: need one weight per atom");
    if (weights.minCoeff() <= 0.0) throw std::invalid_argument("make_mass: weights must be positive");
    Mass m;
    m.points = std::move(points);
    m.weights = std::move(weights);
    m.total = m.weights.sum();
    return m;
}

inline void check_unit_direction(const Eigen::VectorXd& p, const char* where) {
    if (std::abs(p.norm() - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(where) + ": direction must be unit-norm");
}

// Mass of the closed halfspace <x, p> >= 0, with boundary atoms counted half.
inline double halfspace_mass(const Mass& m, const Eigen::VectorXd& p) {
    check_unit_direction(p, "halfspace_mass");
    if (p.size() != m.points.cols())
        throw std::invalid_argument("halfspace_mass: dimension mismatch");
    double acc = 0.0;
    for (int i = 0; i < m.points.rows(); ++i) {
        const double s = m.points.row(i).dot(p);
        if (s > 0.0)
            acc += m.weights[i];
        else if (s == 0.0)
            acc += 0.5 * m.weights[i];
    }
    return acc;
}

// halfspace_mass(m, p) - halfspace_mass(m, -p); exactly odd in p by the
// boundary-splitting rule.
inline double bisection_residual(const Mass& m, const Eigen::VectorXd& p) {
    check_unit_direction(p, "bisection_residual");
    if (p.size() != m.points.cols())
        throw std::invalid_argument("bisection_residual: dimension mismatch");
    double acc = 0.0;
    for (int i = 0; i < m.points.rows(); ++i) {
        const double s = m.points.row(i).dot(p);
        if (s > 0.0)
            acc += m.weights[i];
        else if (s < 0.0)
            acc -= m.weights[i];
    }
    return acc;
}

inline double max_atom_weight(const std::vector<Mass>& masses) {
    double w = 0.0;
    for (const auto& m : masses) w = std::max(w, m.weights.maxCoeff());
    return w;
}

namespace detail {

inline double smoothed_residual(const Mass& m, const Eigen::VectorXd& p, double sharpness) {
    double acc = 0.0;
    for (int i = 0; i < m.points.rows(); ++i)
        acc += m.weights[i] * std::tanh(sharpness * m.points.row(i).dot(p));
    return acc;
}

inline Eigen::VectorXd smoothed_residual_grad(const Mass& m, const Eigen::VectorXd& p,
                                              double sharpness) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(p.size());
    for (int i = 0; i < m.points.rows(); ++i) {
        const double t = std::tanh(sharpness * m.points.row(i).dot(p));
        g += m.weights[i] * sharpness * (1.0 - t * t) * m.points.row(i).transpose();
    }
    return g;
}

// Smoothed residual vector map over directions, as a capture-ready odd map
// with an analytic Jacobian.
inline OddVectorMap smoothed_mass_map(const std::vector<Mass>* masses, int dim_domain,
                                      double sharpness) {
    OddVectorMap f;
    f.dim_domain = dim_domain;
    f.dim_codomain = static_cast<int>(masses->size());
    f.eval = [masses, sharpness](const Eigen::VectorXd& p) {
        Eigen::VectorXd out(static_cast<int>(masses->size()));
        const Eigen::VectorXd q = p / p.norm();
        for (std::size_t i = 0; i < masses->size(); ++i)
            out[static_cast<int>(i)] = smoothed_residual((*masses)[i], q, sharpness);
        return out;
    };
    f.jacobian = [masses, sharpness](const Eigen::VectorXd& p) {
        Eigen::MatrixXd J(static_cast<int>(masses->size()), p.size());
        const Eigen::VectorXd q = p / p.norm();
        for (std::size_t i = 0; i < masses->size(); ++i)
            J.row(static_cast<int>(i)) =
                smoothed_residual_grad((*masses)[i], q, sharpness).transpose();
        return J;
    };
    return f;
}

inline OddVectorMap exact_mass_map(const std::vector<Mass>* masses, int dim_domain) {
    OddVectorMap f;
    f.dim_domain = dim_domain;
    f.dim_codomain = static_cast<int>(masses->size());
    f.eval = [masses](const Eigen::VectorXd& p) {
        Eigen::VectorXd out(static_cast<int>(masses->size()));
        const Eigen::VectorXd q = p / p.norm();
        for (std::size_t i = 0; i < masses->size(); ++i)
            out[static_cast<int>(i)] = bisection_residual((*masses)[i], q);
        return out;
    };
    return f;
}

// Certificate minimization: when a single captured direction already
// bisects every mass within tolerance, it is a strictly better certificate
// (diameter zero), so drop the rest.
inline void collapse_to_single_direction(const std::vector<Mass>& masses, double tol,
                                         CaptureResult& cap) {
    for (const auto& atom : cap.best.atoms) {
        double worst = 0.0;
        double norm2 = 0.0;
        for (const auto& m : masses) {
            const double r = bisection_residual(m, atom.coords);
            worst = std::max(worst, std::abs(r));
            norm2 += r * r;
        }
        if (worst <= tol) {
            cap.best.atoms = {atom};
            cap.best.weights = Eigen::VectorXd::Ones(1);
            cap.best.diameter = 0.0;
            cap.best.residual = std::sqrt(norm2);
            cap.success = true;
            return;
        }
    }
}

inline std::vector<double> capture_sharpness_schedule() { return {30.0, 120.0, 500.0, 2000.0, 8000.0}; }

} // namespace detail

struct HamResult {
    Eigen::VectorXd direction;
    Eigen::VectorXd residuals; // exact signed imbalance per mass
    double tolerance = 0.0;
    bool success = false;
};

// Classical case: d masses on S^d in R^{d+1}, one oriented hyperplane
// through the origin. Sigmoid-smoothed multi-restart descent, exact
// verification, and a combinatorial polish through near-boundary atoms for
// d <= 2.
inline HamResult solve_ham_sandwich(const std::vector<Mass>& masses, const SearchOptions& opts = {}) {
    if (masses.empty()) throw std::invalid_argument("solve_ham_sandwich: no masses");
    const int amb = static_cast<int>(masses.front().points.cols());
    const int d = amb - 1;
    if (static_cast<int>(masses.size()) != d)
        throw std::invalid_argument(
            "solve_ham_sandwich: needs exactly d masses in R^{d+1} (use halving_directions for more)");
    for (const auto& m : masses)
        if (m.points.cols() != amb) throw std::invalid_argument("solve_ham_sandwich: mixed dimensions");
    opts.validate();

    auto exact_cost = [&](const Eigen::VectorXd& p) {
        double worst = 0.0;
        for (const auto& m : masses) worst = std::max(worst, std::abs(bisection_residual(m, p)));
        return worst;
    };

    Eigen::VectorXd best_p;
    double best_cost = 1e300;
    const std::vector<double> sharp = {8.0, 32.0, 128.0, 512.0, 2048.0, 8192.0};
    for (int restart = 0; restart < opts.restarts; ++restart) {
        Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(restart)));
        Eigen::VectorXd p = random_sphere_point(d, rng).coords;
        for (double s : sharp) {
            AdaptiveStep step(opts.step_initial, opts.step_floor);
            double value = 0.0;
            auto smooth_cost = [&](const Eigen::VectorXd& q) {
                double acc = 0.0;
                for (const auto& m : masses) {
                    const double r = detail::smoothed_residual(m, q, s);
                    acc += r * r;
                }
                return acc;
            };
            value = smooth_cost(p);
            const int iters = std::max(1, opts.max_iterations / static_cast<int>(sharp.size()));
            for (int it = 0; it < iters; ++it) {
                Eigen::VectorXd grad = Eigen::VectorXd::Zero(amb);
                for (const auto& m : masses)
                    grad += 2.0 * detail::smoothed_residual(m, p, s) *
                            detail::smoothed_residual_grad(m, p, s);
                Eigen::VectorXd t = tangent_project(p, grad);
                if (t.norm() > 1.0) t /= t.norm();
                Eigen::VectorXd trial = sphere_step(p, -t, step.step);
                const double tv = smooth_cost(trial);
                if (tv < value) {
                    p = trial;
                    value = tv;
                    step.accept();
                } else {
                    step.reject();
                    if (step.step <= step.floor * 2.0) break;
                }
            }
        }
        const double cost = exact_cost(p);
        if (cost < best_cost) {
            best_cost = cost;
            best_p = p;
        }
    }

    // combinatorial polish: hyperplanes pinned to near-boundary atoms
    if (d == 1 || d == 2) {
        std::vector<Eigen::VectorXd> pool;
        std::vector<std::pair<double, Eigen::VectorXd>> scored;
        for (const auto& m : masses)
            for (int i = 0; i < m.points.rows(); ++i) {
                Eigen::VectorXd x = m.points.row(i).transpose();
                if (x.norm() < 1e-12) continue;
                scored.emplace_back(std::abs(x.dot(best_p)) / x.norm(), x / x.norm());
            }
        std::sort(scored.begin(), scored.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < scored.size() && i < 24; ++i) pool.push_back(scored[i].second);

        std::vector<Eigen::VectorXd> candidates = {best_p};
        if (d == 1) {
            for (const auto& x : pool) {
                Eigen::VectorXd perp(2);
                perp << -x[1], x[0];
                // directions grazing the atom and just past it, both ways
                for (double eps : {0.0, 1e-7, -1e-7}) {
                    Eigen::VectorXd c = perp + eps * x;
                    candidates.push_back(c / c.norm());
                }
            }
        } else {
            for (std::size_t i = 0; i < pool.size(); ++i)
                for (std::size_t j = i + 1; j < pool.size(); ++j) {
                    Eigen::Vector3d a = pool[i], b = pool[j];
                    Eigen::Vector3d c = a.cross(b);
                    if (c.norm() < 1e-10) continue;
                    c /= c.norm();
                    for (const auto& q : {c, (-c).eval()}) {
                        candidates.emplace_back(q);
                        // tilt slightly so the pinned atoms fall strictly inside
                        for (const auto& tilt : {a, b, (-a).eval(), (-b).eval()}) {
                            Eigen::Vector3d t = q + 1e-7 * tilt;
                            candidates.emplace_back(t / t.norm());
                        }
                    }
                }
        }
        for (const auto& cand : candidates) {
            const double cost = exact_cost(cand);
            if (cost < best_cost) {
                best_cost = cost;
                best_p = cand;
            }
        }
    }

    HamResult result;
    result.direction = best_p;
    result.residuals.resize(static_cast<int>(masses.size()));
    for (std::size_t i = 0; i < masses.size(); ++i)
        result.residuals[static_cast<int>(i)] = bisection_residual(masses[i], best_p);
    result.tolerance = max_atom_weight(masses) + 1e-12;
    result.success = best_cost <= result.tolerance;
    return result;
}

struct HalvingResult {
    bool success = false;
    std::vector<SpherePoint> directions; // the set A of oriented hyperplane normals
    Eigen::VectorXd weights;             // capture weights over the directions
    double diameter = 0.0;
    double capture_residual = 0.0;       // || sum_j w_j residualvec(p_j) || exact
    Eigen::MatrixXd residual_table;      // residual_table(i, j) = residual of mass i at p_j
    std::vector<std::pair<int, int>> witnesses; // per mass: (a_i, b_i) indices into directions
    double tolerance = 0.0;
};

// n masses on S^d, n >= d: a set of directions of diameter <= delta such
// that every mass is nonpositively bisected at some direction and
// nonnegatively at another. Runs the capture solver on the smoothed residual
// map (sharpness annealed); verification and the final reweighting use the
// exact indicator map.
inline HalvingResult halving_directions(const std::vector<Mass>& masses, double delta,
                                        const SearchOptions& opts = {}) {
    if (masses.empty()) throw std::invalid_argument("halving_directions: no masses");
    const int amb = static_cast<int>(masses.front().points.cols());
    const int d = amb - 1;
    for (const auto& m : masses)
        if (m.points.cols() != amb) throw std::invalid_argument("halving_directions: mixed dimensions");

    std::vector<OddVectorMap> stages;
    for (double s : detail::capture_sharpness_schedule())
        stages.push_back(detail::smoothed_mass_map(&masses, d, s));
    const OddVectorMap exact = detail::exact_mass_map(&masses, d);

    const double tol = max_atom_weight(masses) + 1e-9;
    CaptureResult cap = detail::capture_core(stages, exact, delta, opts, tol);
    detail::collapse_to_single_direction(masses, tol, cap);

    HalvingResult result;
    result.tolerance = tol;
    result.directions = cap.best.atoms;
    result.weights = cap.best.weights;
    result.diameter = cap.best.diameter;
    result.capture_residual = cap.best.residual;

    const int m = static_cast<int>(result.directions.size());
    if (m == 0) return result;
    result.residual_table.resize(static_cast<int>(masses.size()), m);
    for (std::size_t i = 0; i < masses.size(); ++i)
        for (int j = 0; j < m; ++j)
            result.residual_table(static_cast<int>(i), j) =
                bisection_residual(masses[i], result.directions[j].coords);

    bool all_witnessed = cap.success;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        int lo = 0, hi = 0;
        for (int j = 1; j < m; ++j) {
            if (result.residual_table(static_cast<int>(i), j) < result.residual_table(static_cast<int>(i), lo)) lo = j;
            if (result.residual_table(static_cast<int>(i), j) > result.residual_table(static_cast<int>(i), hi)) hi = j;
        }
        result.witnesses.emplace_back(lo, hi);
        if (result.residual_table(static_cast<int>(i), lo) > tol) all_witnessed = false;
        if (result.residual_table(static_cast<int>(i), hi) < -tol) all_witnessed = false;
    }
    result.success = all_witnessed && result.diameter <= delta + 1e-6;
    return result;
}

// Horizontal cut times plus per-slab halfspace directions.
struct LogPartition {
    std::vector<double> times;              // 0 = t_0 <= ... <= t_{k+1} = 1
    std::vector<Eigen::VectorXd> directions; // k+1 unit vectors in R^{d+2}
    Eigen::VectorXd residuals;              // per-mass signed imbalance
    bool affine_lift = false;               // true when cuts need not pass the origin
};

struct LogBundleResult {
    bool success = false;
    LogPartition partition;
    double direction_diameter = 0.0; // max pairwise angle among the cut directions
    double tolerance = 0.0;
};

namespace detail {

// Points x in the unit ball of R^{d+1} are lifted to (x, 1) in R^{d+2}; a
// direction (q, c) then scores <x, q> + c, so c = 0 recovers linear cuts and
// a free last coordinate realizes affine ones.
inline std::vector<Mass> lift_masses(const std::vector<Mass>& masses) {
    std::vector<Mass> lifted;
    for (const auto& m : masses) {
        Mass l;
        l.points.resize(m.points.rows(), m.points.cols() + 1);
        l.points.leftCols(m.points.cols()) = m.points;
        l.points.col(m.points.cols()).setOnes();
        l.weights = m.weights;
        l.total = m.total;
        lifted.push_back(std::move(l));
    }
    return lifted;
}

} // namespace detail

// Exact per-mass residuals of a log partition, recomputed from the masses
// and the partition alone: sum_i (t_i - t_{i-1}) * (mass in H+(p_i) - mass
// in H-(p_i)).
inline Eigen::VectorXd verify_partition(const std::vector<Mass>& masses, const LogPartition& part) {
    if (masses.empty()) throw std::invalid_argument("verify_partition: no masses");
    const std::size_t cuts = part.directions.size();
    if (part.times.size() != cuts + 1)
        throw std::invalid_argument("verify_partition: need one more time than directions");
    if (std::abs(part.times.front()) > 1e-12 || std::abs(part.times.back() - 1.0) > 1e-12)
        throw std::invalid_argument("verify_partition: times must run from 0 to 1");
    for (std::size_t i = 0; i + 1 < part.times.size(); ++i)
        if (part.times[i] > part.times[i + 1] + 1e-12)
            throw std::invalid_argument("verify_partition: times must be nondecreasing");

    const std::vector<Mass> lifted = detail::lift_masses(masses);
    Eigen::VectorXd res = Eigen::VectorXd::Zero(static_cast<int>(masses.size()));
    for (std::size_t c = 0; c < cuts; ++c) {
        const Eigen::VectorXd& p = part.directions[c];
        if (p.size() != lifted.front().points.cols())
            throw std::invalid_argument("verify_partition: direction dimension mismatch");
        check_unit_direction(p, "verify_partition");
        const double span = part.times[c + 1] - part.times[c];
        if (span <= 0.0) continue;
        for (std::size_t i = 0; i < masses.size(); ++i)
            res[static_cast<int>(i)] += span * bisection_residual(lifted[i], p);
    }
    return res;
}

// Log-bundle equipartition of n masses in the unit ball of R^{d+1}: at most
// n horizontal cuts and per-slab halfspace cuts whose directions stay within
// pairwise angle delta. With affine_lift, hyperplanes need not pass through
// the origin (one extra mass becomes feasible).
inline LogBundleResult solve_log_bundle(const std::vector<Mass>& masses, double delta,
                                        const SearchOptions& opts = {}, bool affine_lift = false) {
    if (masses.empty()) throw std::invalid_argument("solve_log_bundle: no masses");
    const int ball_dim = static_cast<int>(masses.front().points.cols());
    for (const auto& m : masses) {
        if (m.points.cols() != ball_dim)
            throw std::invalid_argument("solve_log_bundle: mixed dimensions");
        for (int i = 0; i < m.points.rows(); ++i)
            if (m.points.row(i).norm() > 1.0 + 1e-9)
                throw std::invalid_argument("solve_log_bundle: disk masses must lie in the unit ball");
    }

    const std::vector<Mass> lifted = detail::lift_masses(masses);
    // search space: directions (q, 0) on S^{d} for linear cuts, or the full
    // lifted sphere S^{d+1} for affine ones
    const int search_dim = affine_lift ? ball_dim : ball_dim - 1;

    std::vector<Mass> search_masses;
    if (affine_lift) {
        search_masses = lifted;
    } else {
        search_masses = masses; // score <x, q> directly
    }

    std::vector<OddVectorMap> stages;
    for (double s : detail::capture_sharpness_schedule())
        stages.push_back(detail::smoothed_mass_map(&search_masses, search_dim, s));
    const OddVectorMap exact = detail::exact_mass_map(&search_masses, search_dim);

    const double tol_atoms = max_atom_weight(masses) + 1e-9;
    CaptureResult cap = detail::capture_core(stages, exact, delta, opts, tol_atoms);
    detail::collapse_to_single_direction(search_masses, tol_atoms, cap);

    LogBundleResult result;
    result.tolerance = tol_atoms;
    result.partition.affine_lift = affine_lift;
    if (cap.best.atoms.empty()) return result;

    result.partition.times.push_back(0.0);
    double acc = 0.0;
    for (std::size_t j = 0; j < cap.best.atoms.size(); ++j) {
        acc += cap.best.weights[static_cast<int>(j)];
        result.partition.times.push_back(std::min(acc, 1.0));
        Eigen::VectorXd dir;
        if (affine_lift) {
            dir = cap.best.atoms[j].coords;
        } else {
            dir.resize(ball_dim + 1);
            dir.head(ball_dim) = cap.best.atoms[j].coords;
            dir[ball_dim] = 0.0;
        }
        result.partition.directions.push_back(std::move(dir));
    }
    result.partition.times.back() = 1.0;
    result.direction_diameter = cap.best.diameter;
    result.partition.residuals = verify_partition(masses, result.partition);
    result.success = cap.success && result.direction_diameter <= delta + 1e-6 &&
                     result.partition.residuals.cwiseAbs().maxCoeff() <= tol_atoms;
    return result;
}

} // namespace pcode
