#pragma once

// Origin-capture machinery. find_zero_capture looks for a small-diameter set
// A on the sphere together with convex weights whose image under an odd map
// averages to zero: a witness that the map cannot stay one-signed near A.
// Search: multi-restart projected gradient over n+1 sphere points with exact
// simplex reweighting (the weight subproblem is the hull solver) and an
// annealed pairwise-diameter hinge penalty; certificates are re-checked from
// the atoms and weights alone. Failure is reported as "no certificate
// found", never as nonexistence.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "pcode/code.hpp"
#include "pcode/hull.hpp"
#include "pcode/measure.hpp"
#include "pcode/oddmap.hpp"
#include "pcode/search.hpp"
#include "pcode/sphere.hpp"

namespace pcode {

// Evaluable map on unit vectors of R^{d+1}, assumed odd. The optional
// Jacobian is used by solvers; otherwise central differences at fd_step
// (points renormalized, so the numeric derivative is automatically tangent).
struct OddVectorMap {
    int dim_domain = 0;
    int dim_codomain = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian; // optional
    double fd_step = 1e-5;
};

inline OddVectorMap as_vector_map(const OddMapSpace& f) {
    OddVectorMap m;
    m.dim_domain = f.dim_domain;
    m.dim_codomain = f.dim_codomain;
    m.eval = f.fn();
    return m;
}

struct CapturedSet {
    std::vector<SpherePoint> atoms;
    Eigen::VectorXd weights;  // simplex vector over the atoms
    double diameter = 0.0;    // exact set diameter of the atoms
    double residual = 1e300;  // ||sum_i w_i f(a_i)||
};

struct CaptureResult {
    bool success = false;
    CapturedSet best;          // best diameter-feasible certificate found
    double delta = 0.0;        // requested diameter budget
    int winning_restart = -1;
    int restarts_run = 0;
};

namespace detail {

inline Eigen::MatrixXd numeric_jacobian(const OddVectorMap& f, const Eigen::VectorXd& x) {
    if (f.jacobian) return f.jacobian(x);
    const int amb = f.dim_domain + 1;
    Eigen::MatrixXd J(f.dim_codomain, amb);
    for (int c = 0; c < amb; ++c) {
        Eigen::VectorXd hi = x, lo = x;
        hi[c] += f.fd_step;
        lo[c] -= f.fd_step;
        hi /= hi.norm();
        lo /= lo.norm();
        J.col(c) = (f.eval(hi) - f.eval(lo)) / (2.0 * f.fd_step);
    }
    return J;
}

struct CaptureEval {
    Eigen::VectorXd lambda;      // exact simplex-optimal weights
    Eigen::VectorXd lambda_mix;  // weights used for the descent objective
    Eigen::VectorXd r;           // sum_i lambda_mix_i f(x_i)
    double residual = 0.0;       // exact residual at lambda
    double diameter = 0.0;
    double penalty = 0.0;        // sum of squared hinge violations
    double objective = 0.0;
};

// Weights come from the exact simplex subproblem; during early anneal stages
// they are blended with uniform weights so zero-weight atoms keep receiving
// a residual gradient instead of going dead.
inline CaptureEval evaluate_configuration(const std::vector<Eigen::VectorXd>& atoms,
                                          const std::vector<Eigen::VectorXd>& values,
                                          double delta, double rho, double mix,
                                          const Eigen::VectorXd* warm_lambda) {
    const int m = static_cast<int>(atoms.size());
    const int n = static_cast<int>(values.front().size());
    Eigen::MatrixXd F(n, m);
    for (int i = 0; i < m; ++i) F.col(i) = values[i];
    auto weights = detail::simplex_min_norm(F, 1e-13, 20000, false, warm_lambda);

    CaptureEval ev;
    ev.lambda = std::move(weights.lambda);
    ev.residual = weights.point.norm();
    ev.lambda_mix = (1.0 - mix) * ev.lambda + Eigen::VectorXd::Constant(m, mix / m);
    ev.r = F * ev.lambda_mix;
    ev.diameter = 0.0;
    ev.penalty = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const double c = clamp_unit(atoms[i].dot(atoms[j]));
            const double theta = std::acos(c);
            ev.diameter = std::max(ev.diameter, theta);
            const double h = std::max(0.0, theta - delta);
            ev.penalty += h * h;
        }
    ev.objective = ev.r.squaredNorm() + rho * ev.penalty;
    return ev;
}

// One restart of the joint (atoms, weights) descent across the supplied
// per-stage maps (usually the same map repeated; mass solvers pass a
// sharpening family). Returns the best diameter-feasible state seen.
struct RestartOutcome {
    std::vector<Eigen::VectorXd> atoms;
    Eigen::VectorXd lambda;
    double residual = 1e300;
    double diameter = 0.0;
    bool feasible = false;
};

inline RestartOutcome capture_restart(const std::vector<OddVectorMap>& stage_maps, double delta,
                                      int support, const SearchOptions& opts, Rng& rng,
                                      double feas_slack, int restart_index) {
    const int d = stage_maps.front().dim_domain;
    const int amb = d + 1;

    // initialization modes: iid spread, cluster, and points spread along a
    // random great circle (the shape that wraps the sphere; a plain cluster
    // or iid draw rarely reaches that basin once the diameter penalty is on)
    std::vector<Eigen::VectorXd> atoms;
    switch (restart_index % 3) {
        case 0:
            for (int i = 0; i < support; ++i) atoms.push_back(random_sphere_point(d, rng).coords);
            break;
        case 1: {
            const Eigen::VectorXd center = random_sphere_point(d, rng).coords;
            const double spread = std::max(0.15, 0.25 * delta);
            for (int i = 0; i < support; ++i) {
                Eigen::VectorXd v = center;
                for (int c = 0; c < amb; ++c) v[c] += spread * rng.normal();
                atoms.push_back(v / v.norm());
            }
            break;
        }
        default: {
            Eigen::VectorXd u = random_sphere_point(d, rng).coords;
            Eigen::VectorXd w = random_sphere_point(d, rng).coords;
            Eigen::VectorXd v = tangent_project(u, w);
            while (v.norm() < 1e-6) v = tangent_project(u, random_sphere_point(d, rng).coords);
            v /= v.norm();
            const double jitter = rng.uniform(0.0, 2.0 * kPi);
            for (int i = 0; i < support; ++i) {
                const double t = jitter + 2.0 * kPi * i / support;
                Eigen::VectorXd x = std::cos(t) * u + std::sin(t) * v;
                for (int c = 0; c < amb; ++c) x[c] += 0.02 * rng.normal();
                atoms.push_back(x / x.norm());
            }
            break;
        }
    }

    const int n_stages = static_cast<int>(stage_maps.size());
    const std::vector<double> rho_schedule = {10.0, 100.0, 1e3, 1e4, 1e5};
    const std::vector<double> mix_schedule = {0.25, 0.1, 0.02, 0.0, 0.0};
    const int total_stages = std::max<int>(n_stages, static_cast<int>(rho_schedule.size()));
    const int iters_per_stage = std::max(1, opts.max_iterations / total_stages);

    RestartOutcome best;
    Eigen::VectorXd warm;

    for (int stage = 0; stage < total_stages; ++stage) {
        const OddVectorMap& f = stage_maps[std::min(stage, n_stages - 1)];
        const double rho = rho_schedule[std::min<std::size_t>(stage, rho_schedule.size() - 1)];
        const double mix = mix_schedule[std::min<std::size_t>(stage, mix_schedule.size() - 1)];

        std::vector<Eigen::VectorXd> values(support);
        for (int i = 0; i < support; ++i) values[i] = f.eval(atoms[i]);
        CaptureEval ev = evaluate_configuration(atoms, values, delta, rho, mix,
                                                warm.size() ? &warm : nullptr);
        warm = ev.lambda;

        auto consider = [&](const CaptureEval& e) {
            if (e.diameter <= delta + feas_slack && (!best.feasible || e.residual < best.residual))
                best = {atoms, e.lambda, e.residual, e.diameter, true};
        };
        consider(ev);

        AdaptiveStep step(opts.step_initial, opts.step_floor);
        int stale = 0;
        for (int it = 0; it < iters_per_stage; ++it) {
            if (best.feasible && best.residual <= 1e-10) return best; // deep convergence

            // gradient of ||r||^2 + rho * hinge^2 in the atoms
            std::vector<Eigen::VectorXd> grad(support, Eigen::VectorXd::Zero(amb));
            for (int i = 0; i < support; ++i) {
                if (ev.lambda_mix[i] > 0.0) {
                    const Eigen::MatrixXd J = numeric_jacobian(f, atoms[i]);
                    grad[i] = 2.0 * ev.lambda_mix[i] * (J.transpose() * ev.r);
                }
            }
            for (int i = 0; i < support; ++i)
                for (int j = i + 1; j < support; ++j) {
                    const double c = clamp_unit(atoms[i].dot(atoms[j]));
                    const double theta = std::acos(c);
                    const double h = theta - delta;
                    if (h <= 0.0) continue;
                    const double s = std::sqrt(std::max(1.0 - c * c, 1e-16));
                    grad[i] += rho * 2.0 * h * (-atoms[j] / s);
                    grad[j] += rho * 2.0 * h * (-atoms[i] / s);
                }

            std::vector<Eigen::VectorXd> trial(support);
            for (int i = 0; i < support; ++i) {
                Eigen::VectorXd t = tangent_project(atoms[i], grad[i]);
                const double tn = t.norm();
                if (tn > 1.0) t /= tn; // cap the step length
                trial[i] = sphere_step(atoms[i], -t, step.step);
            }
            std::vector<Eigen::VectorXd> trial_values(support);
            for (int i = 0; i < support; ++i) trial_values[i] = f.eval(trial[i]);
            CaptureEval trial_ev =
                evaluate_configuration(trial, trial_values, delta, rho, mix, &warm);

            if (trial_ev.objective < ev.objective) {
                atoms.swap(trial);
                values.swap(trial_values);
                const double gain = ev.objective - trial_ev.objective;
                ev = trial_ev;
                warm = ev.lambda;
                step.accept();
                consider(ev);
                stale = gain < 1e-16 * std::max(1.0, ev.objective) ? stale + 1 : 0;
            } else {
                step.reject();
                ++stale;
            }
            if (stale > 250 || step.step <= step.floor * 2.0) break;
        }
    }
    return best;
}

inline RestartOutcome single_point_restart(const std::vector<OddVectorMap>& stage_maps,
                                           const SearchOptions& opts, Rng& rng) {
    const OddVectorMap& f = stage_maps.back();
    Eigen::VectorXd x = random_sphere_point(f.dim_domain, rng).coords;
    Eigen::VectorXd v = f.eval(x);
    AdaptiveStep step(opts.step_initial, opts.step_floor);
    int stale = 0;
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (v.norm() <= 1e-12) break;
        const Eigen::MatrixXd J = numeric_jacobian(f, x);
        Eigen::VectorXd grad = tangent_project(x, 2.0 * (J.transpose() * v));
        if (grad.norm() > 1.0) grad /= grad.norm();
        Eigen::VectorXd trial = sphere_step(x, -grad, step.step);
        Eigen::VectorXd tv = f.eval(trial);
        if (tv.squaredNorm() < v.squaredNorm()) {
            x = trial;
            v = tv;
            step.accept();
            stale = 0;
        } else {
            step.reject();
            ++stale;
        }
        if (stale > 300 || step.step <= step.floor * 2.0) break;
    }
    RestartOutcome out;
    out.atoms = {x};
    out.lambda = Eigen::VectorXd::Ones(1);
    out.residual = v.norm();
    out.diameter = 0.0;
    out.feasible = true;
    return out;
}

inline CapturedSet certify(const std::vector<Eigen::VectorXd>& atoms, const Eigen::VectorXd& lambda,
                           const OddVectorMap& certify_map) {
    // drop zero-weight atoms, merge coincident ones, reweight exactly
    std::vector<Eigen::VectorXd> kept;
    std::vector<double> w;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (lambda[static_cast<int>(i)] <= 1e-12) continue;
        bool merged = false;
        for (std::size_t j = 0; j < kept.size(); ++j)
            if ((kept[j] - atoms[i]).norm() <= 1e-9) {
                w[j] += lambda[static_cast<int>(i)];
                merged = true;
                break;
            }
        if (!merged) {
            kept.push_back(atoms[i]);
            w.push_back(lambda[static_cast<int>(i)]);
        }
    }
    if (kept.empty()) {
        kept.push_back(atoms.front());
        w.push_back(1.0);
    }

    const int m = static_cast<int>(kept.size());
    Eigen::MatrixXd F(certify_map.dim_codomain, m);
    for (int i = 0; i < m; ++i) F.col(i) = certify_map.eval(kept[i]);
    Eigen::VectorXd warm = Eigen::Map<Eigen::VectorXd>(w.data(), m);
    warm /= warm.sum();
    auto weights = detail::simplex_min_norm(F, 1e-13, 50000, false, &warm);

    CapturedSet cert;
    for (const auto& a : kept) cert.atoms.emplace_back(a);
    cert.weights = weights.lambda;
    cert.residual = weights.point.norm();
    cert.diameter = cert.atoms.size() > 1 ? set_diameter(cert.atoms) : 0.0;
    return cert;
}

// Staged capture over a family of maps (all stages share the domain); the
// certificate is always evaluated with certify_map.
inline CaptureResult capture_core(const std::vector<OddVectorMap>& stage_maps,
                                  const OddVectorMap& certify_map, double delta,
                                  const SearchOptions& opts, double residual_tol,
                                  double feas_slack = 1e-6) {
    if (delta < 0.0 || delta > kPi)
        throw std::invalid_argument("find_zero_capture: delta must lie in [0, pi]");
    opts.validate();
    const int n = certify_map.dim_codomain;
    const int support = delta <= 1e-15 ? 1 : n + 1; // diameter-0 sets are singletons

    CaptureResult result;
    result.delta = delta;
    for (int restart = 0; restart < opts.restarts; ++restart) {
        Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(restart)));
        RestartOutcome out;
        if (support == 1)
            out = single_point_restart(stage_maps, opts, rng);
        else
            out = capture_restart(stage_maps, delta, support, opts, rng, feas_slack, restart);
        ++result.restarts_run;
        if (!out.feasible) continue;

        CapturedSet cert = certify(out.atoms, out.lambda, certify_map);
        if (cert.diameter > delta + feas_slack) continue;
        if (cert.residual < result.best.residual) {
            result.best = std::move(cert);
            result.winning_restart = restart;
            result.success = result.best.residual <= residual_tol;
        }
        if (result.success && result.best.residual <= 1e-9) break; // deep success
    }
    return result;
}

} // namespace detail

// Diameter-constrained zero capture for an odd map f: S^d -> R^n. On
// success: at most n+1 atoms of diameter <= delta + 1e-6 whose weighted
// image sums below residual_tol. Failure is inconclusive.
inline CaptureResult find_zero_capture(const OddVectorMap& f, double delta,
                                       const SearchOptions& opts = {},
                                       double residual_tol = 1e-6) {
    return detail::capture_core({f}, f, delta, opts, residual_tol);
}

inline CaptureResult find_zero_capture(const OddMapSpace& f, double delta,
                                       const SearchOptions& opts = {},
                                       double residual_tol = 1e-6) {
    return find_zero_capture(as_vector_map(f), delta, opts, residual_tol);
}

struct MatchingResult {
    CaptureResult capture;          // certificate for g(x) = f(x) - f(-x)
    Eigen::VectorXd common_point;   // sum_i w_i f(a_i), in conv f(A) and conv f(-A)
};

// Hull-intersection witness for an arbitrary (not necessarily odd) map:
// captures the odd part g(x) = f(x) - f(-x) and reports the common hull
// point of f(A) and f(-A).
inline MatchingResult find_matching_measure(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f, int dim_domain,
    int dim_codomain, double delta, const SearchOptions& opts = {}, double residual_tol = 1e-6) {
    OddVectorMap g;
    g.dim_domain = dim_domain;
    g.dim_codomain = dim_codomain;
    g.eval = [f](const Eigen::VectorXd& x) { return (f(x) - f(-x)).eval(); };

    MatchingResult out;
    out.capture = find_zero_capture(g, delta, opts, residual_tol);
    if (!out.capture.best.atoms.empty()) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim_codomain);
        for (std::size_t i = 0; i < out.capture.best.atoms.size(); ++i)
            acc += out.capture.best.weights[static_cast<int>(i)] *
                   f(out.capture.best.atoms[i].coords);
        out.common_point = acc;
    }
    return out;
}

// The (2k+1)-point configuration of pairwise distance 2 pi k/(2k+1): the
// (2k+1)-th roots of unity, whose moment-curve image captures the origin
// with uniform weights.
inline std::vector<double> sm_symmetric_configuration(int k, double offset = 0.0) {
    if (k < 1) throw std::invalid_argument("sm_symmetric_configuration: k must be >= 1");
    std::vector<double> angles;
    for (int j = 0; j < 2 * k + 1; ++j) angles.push_back(offset + 2.0 * kPi * j / (2 * k + 1));
    return angles;
}

struct SmLemmaResult {
    HullCertificate certificate;
    bool used_wrap_configuration = false; // spread roots-of-unity configuration
    double config_diameter = 0.0;         // exact diameter of the sampled set
};

// Hull test for the moment curve on a diameter-budgeted configuration.
// Below the capture threshold 2 pi k/(2k+1) every admissible set is an arc
// (arcs of length < pi never capture: cos(t - c) separates), so a uniform
// arc sample of the given diameter is used. At or above the threshold the
// extremal wrap configuration (roots of unity, diameter exactly the
// threshold) exists inside the budget and decides the question.
inline SmLemmaResult verify_sm_lemma(int k, double diameter, int samples, double arc_start = 0.0) {
    if (k < 1) throw std::invalid_argument("verify_sm_lemma: k must be >= 1");
    if (diameter < 0.0 || diameter > kPi)
        throw std::invalid_argument("verify_sm_lemma: diameter must lie in [0, pi]");
    if (samples < 3) throw std::invalid_argument("verify_sm_lemma: need at least 3 samples");

    const double threshold = 2.0 * kPi * k / (2 * k + 1);
    SmLemmaResult out;
    std::vector<double> angles;
    if (diameter >= threshold - 1e-12) {
        angles = sm_symmetric_configuration(k, arc_start);
        out.used_wrap_configuration = true;
    } else {
        for (int s = 0; s < samples; ++s)
            angles.push_back(arc_start + diameter * s / (samples - 1));
    }
    std::vector<SpherePoint> pts;
    for (double t : angles) pts.push_back(circle_point(t));
    out.config_diameter = set_diameter(pts);

    std::vector<Eigen::VectorXd> images;
    for (double t : angles) images.push_back(sm_curve(k, t));
    out.certificate = origin_in_hull(images);
    return out;
}

// A cover set given by membership and distance oracles.
struct CoverSet {
    std::function<bool(const SpherePoint&)> contains;
    std::function<double(const SpherePoint&)> distance; // geodesic distance to the set
};

// Closed arc [lo, hi] on S^1 (angles; hi >= lo, length <= 2 pi).
inline CoverSet make_arc_cover(double lo, double hi) {
    if (hi < lo || hi - lo > 2.0 * kPi + 1e-12)
        throw std::invalid_argument("make_arc_cover: need lo <= hi <= lo + 2 pi");
    CoverSet set;
    auto in_arc = [lo, hi](double t) {
        double u = std::fmod(t - lo, 2.0 * kPi);
        if (u < 0.0) u += 2.0 * kPi;
        return u <= hi - lo + 1e-12;
    };
    set.contains = [in_arc](const SpherePoint& x) { return in_arc(circle_angle(x)); };
    set.distance = [lo, hi, in_arc](const SpherePoint& x) {
        const double t = circle_angle(x);
        if (in_arc(t)) return 0.0;
        double best = kPi;
        for (double end : {lo, hi}) {
            double d = std::abs(std::fmod(t - end, 2.0 * kPi));
            if (d > kPi) d = 2.0 * kPi - d;
            best = std::min(best, d);
        }
        return best;
    };
    return set;
}

struct LsbReport {
    enum class Kind { AntipodalWitness, HypothesisViolation, Inconclusive };
    Kind kind = Kind::Inconclusive;
    int set_index = -1;                       // witness: 0-based cover index
    SpherePoint witness;                      // witness: x with x, -x in the set
    std::vector<SpherePoint> violating_subset; // violation: small-diameter subset in no set
    double violating_diameter = 0.0;
    double threshold = 0.0;                   // diameter bound used for the hypothesis check
    CaptureResult capture;                    // diagnostics from the witness search
};

// Antipodal-witness search for a cover of S^d by n+1 sets. Two phases:
// a sampled check of the covering hypothesis (every sampled subset of
// diameter <= threshold lies in one set), then capture of the odd map
// x -> (d(x, A_i) - d(-x, A_i))_i and a scan of the captured support for a
// same-set antipodal pair. The threshold is 0 when n == d (a cover is
// enough there) and pi minus the certified packing bound otherwise.
inline LsbReport lsb_witness(const std::vector<CoverSet>& cover, int d,
                             const SearchOptions& opts = {}, double threshold_override = -1.0) {
    if (cover.size() < 2) throw std::invalid_argument("lsb_witness: need at least 2 cover sets");
    if (d < 1) throw std::invalid_argument("lsb_witness: d must be >= 1");
    const int n = static_cast<int>(cover.size()) - 1;
    if (n < d) throw std::invalid_argument("lsb_witness: need at least d+1 cover sets");

    LsbReport report;
    report.threshold = threshold_override >= 0.0
                           ? threshold_override
                           : (n == d ? 0.0 : kPi - packing_lower_bound(d, n + 1, opts.seed));

    // sample grid
    std::vector<SpherePoint> grid;
    if (d == 1) {
        const int g = 720;
        for (int i = 0; i < g; ++i) grid.push_back(circle_point(2.0 * kPi * i / g));
    } else {
        Rng rng(derive_seed(opts.seed, 0x15b));
        for (int i = 0; i < 2000; ++i) grid.push_back(random_sphere_point(d, rng));
    }

    // immediate witnesses: same-set antipodal pairs on the grid
    for (const auto& x : grid) {
        const SpherePoint y = antipode(x);
        for (std::size_t i = 0; i < cover.size(); ++i)
            if (cover[i].contains(x) && cover[i].contains(y)) {
                report.kind = LsbReport::Kind::AntipodalWitness;
                report.set_index = static_cast<int>(i);
                report.witness = x;
                return report;
            }
    }

    // hypothesis check on sampled subsets of diameter <= threshold
    auto subset_in_one_set = [&cover](const std::vector<SpherePoint>& subset) {
        for (const auto& set : cover) {
            bool all = true;
            for (const auto& p : subset)
                if (!set.contains(p)) {
                    all = false;
                    break;
                }
            if (all) return true;
        }
        return false;
    };
    if (report.threshold <= 1e-12) {
        for (const auto& x : grid)
            if (!subset_in_one_set({x})) {
                report.kind = LsbReport::Kind::HypothesisViolation;
                report.violating_subset = {x};
                report.violating_diameter = 0.0;
                return report;
            }
    } else if (d == 1) {
        // sliding closed windows of arc length = threshold
        const int g = static_cast<int>(grid.size());
        const int span = static_cast<int>(std::floor(report.threshold * g / (2.0 * kPi)));
        for (int start = 0; start < g; ++start) {
            std::vector<SpherePoint> window;
            for (int off = 0; off <= span; ++off) window.push_back(grid[(start + off) % g]);
            if (!subset_in_one_set(window)) {
                report.kind = LsbReport::Kind::HypothesisViolation;
                report.violating_subset = window;
                report.violating_diameter = set_diameter(window);
                return report;
            }
        }
    } else {
        // sampled pairs within the threshold
        Rng rng(derive_seed(opts.seed, 0x9a1));
        for (int trial = 0; trial < 4000; ++trial) {
            const SpherePoint x = grid[rng.bits() % grid.size()];
            Eigen::VectorXd dir = tangent_project(x.coords, random_sphere_point(d, rng).coords);
            if (dir.norm() < 1e-9) continue;
            dir /= dir.norm();
            const double t = rng.uniform(0.0, report.threshold);
            SpherePoint y{std::cos(t) * x.coords + std::sin(t) * dir};
            if (!subset_in_one_set({x, y})) {
                report.kind = LsbReport::Kind::HypothesisViolation;
                report.violating_subset = {x, y};
                report.violating_diameter = geodesic_distance(x, y);
                return report;
            }
        }
    }

    // capture the odd distance map and scan the support
    OddVectorMap g;
    g.dim_domain = d;
    g.dim_codomain = n;
    g.fd_step = 1e-4;
    g.eval = [&cover, n](const Eigen::VectorXd& x) {
        Eigen::VectorXd out(n);
        SpherePoint p{x}, q = antipode(p);
        for (int i = 0; i < n; ++i) out[i] = cover[i].distance(p) - cover[i].distance(q);
        return out;
    };
    report.capture = find_zero_capture(g, report.threshold, opts, 1e-3);

    std::vector<SpherePoint> candidates = report.capture.best.atoms;
    for (const auto& a : report.capture.best.atoms) {
        Rng rng(derive_seed(opts.seed, 0xca4d));
        for (int j = 0; j < 50; ++j) {
            Eigen::VectorXd v = a.coords;
            for (int c = 0; c <= d; ++c) v[c] += 0.01 * rng.normal();
            candidates.emplace_back(v);
        }
    }
    for (const auto& x : candidates) {
        const SpherePoint y = antipode(x);
        for (std::size_t i = 0; i < cover.size(); ++i)
            if (cover[i].contains(x) && cover[i].contains(y)) {
                report.kind = LsbReport::Kind::AntipodalWitness;
                report.set_index = static_cast<int>(i);
                report.witness = x;
                return report;
            }
    }
    report.kind = LsbReport::Kind::Inconclusive;
    return report;
}

} // namespace pcode
