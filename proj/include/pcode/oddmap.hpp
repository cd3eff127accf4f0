#pragma once

// Evaluable odd maps S^d -> R^n. Components are formal polynomials built
// from odd-total-degree monomials (so oddness holds structurally and
// exactly), or the builtin symmetric trigonometric moment curve on S^1.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "pcode/rng.hpp"
#include "pcode/sphere.hpp"

namespace pcode {

// Symmetric trigonometric moment curve SM_{2k}(t) =
// (cos t, sin t, cos 3t, sin 3t, ..., cos((2k-1)t), sin((2k-1)t)) in R^{2k}.
inline Eigen::VectorXd sm_curve(int k, double t) {
    if (k < 1) throw std::invalid_argument("sm_curve: k must be >= 1");
    Eigen::VectorXd v(2 * k);
    for (int j = 0; j < k; ++j) {
        const double m = 2.0 * j + 1.0;
        v[2 * j] = std::cos(m * t);
        v[2 * j + 1] = std::sin(m * t);
    }
    return v;
}

struct Monomial {
    std::vector<int> exps; // one exponent per ambient coordinate
    double coef = 0.0;
};

struct PolyComponent {
    std::vector<Monomial> monomials;

    double eval(const Eigen::VectorXd& x) const {
        double acc = 0.0;
        for (const auto& m : monomials) {
            double term = m.coef;
            for (std::size_t i = 0; i < m.exps.size(); ++i)
                for (int e = 0; e < m.exps[i]; ++e) term *= x[static_cast<int>(i)];
            acc += term;
        }
        return acc;
    }
};

// An n-tuple of odd functions on S^d. Spans (via coefficient vectors z) the
// vector space of maps x -> <z, f(x)>.
struct OddMapSpace {
    int dim_domain = 0;   // d
    int dim_codomain = 0; // n
    std::vector<PolyComponent> components;
    bool is_sm = false;
    int sm_k = 0;

    Eigen::VectorXd eval(const Eigen::VectorXd& x) const {
        if (x.size() != dim_domain + 1)
            throw std::invalid_argument("OddMapSpace::eval: dimension mismatch");
        if (is_sm) {
            const double t = std::atan2(x[1], x[0]);
            return sm_curve(sm_k, t);
        }
        Eigen::VectorXd out(dim_codomain);
        for (int i = 0; i < dim_codomain; ++i) out[i] = components[i].eval(x);
        return out;
    }

    Eigen::VectorXd eval(const SpherePoint& x) const { return eval(x.coords); }

    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn() const {
        return [self = *this](const Eigen::VectorXd& x) { return self.eval(x); };
    }
};

// SM_{2k} as a map S^1 -> R^{2k}, with the antipode t -> t + pi.
inline OddMapSpace sm_map(int k) {
    if (k < 1) throw std::invalid_argument("sm_map: k must be >= 1");
    OddMapSpace f;
    f.dim_domain = 1;
    f.dim_codomain = 2 * k;
    f.is_sm = true;
    f.sm_k = k;
    return f;
}

// The first n coordinate functions on S^d.
inline OddMapSpace coordinate_map(int d, int n) {
    if (d < 1) throw std::invalid_argument("coordinate_map: d must be >= 1");
    if (n < 1 || n > d + 1) throw std::invalid_argument("coordinate_map: need 1 <= n <= d+1");
    OddMapSpace f;
    f.dim_domain = d;
    f.dim_codomain = n;
    f.components.resize(n);
    for (int i = 0; i < n; ++i) {
        Monomial m;
        m.exps.assign(d + 1, 0);
        m.exps[i] = 1;
        m.coef = 1.0;
        f.components[i].monomials.push_back(std::move(m));
    }
    return f;
}

namespace detail {

inline void enumerate_exponents(int vars, int degree, std::vector<int>& cur,
                                std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == vars - 1) {
        cur.push_back(degree);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int e = 0; e <= degree; ++e) {
        cur.push_back(e);
        enumerate_exponents(vars, degree - e, cur, out);
        cur.pop_back();
    }
}

inline std::vector<std::vector<int>> odd_monomial_exponents(int vars, int max_degree) {
    std::vector<std::vector<int>> out;
    for (int deg = 1; deg <= max_degree; deg += 2) {
        std::vector<int> cur;
        enumerate_exponents(vars, deg, cur, out);
    }
    return out;
}

} // namespace detail

// n independent random combinations of the odd-total-degree monomials of
// degree <= max_degree in d+1 variables; deterministic per seed.
inline OddMapSpace random_odd_polynomial_map(int d, int n, int max_degree, std::uint64_t seed) {
    if (d < 1 || n < 1) throw std::invalid_argument("random_odd_polynomial_map: d, n must be >= 1");
    if (max_degree < 1 || max_degree % 2 == 0)
        throw std::invalid_argument("random_odd_polynomial_map: max_degree must be odd and >= 1");
    const auto exps = detail::odd_monomial_exponents(d + 1, max_degree);
    Rng rng(derive_seed(seed, 0));
    OddMapSpace f;
    f.dim_domain = d;
    f.dim_codomain = n;
    f.components.resize(n);
    for (int i = 0; i < n; ++i) {
        for (const auto& e : exps) {
            Monomial m;
            m.exps = e;
            m.coef = rng.normal();
            f.components[i].monomials.push_back(std::move(m));
        }
    }
    return f;
}

struct OddnessReport {
    double worst = 0.0;
    bool pass = false;
};

// Worst oddness violation max ||f(-x) + f(x)|| over random sample points.
inline OddnessReport verify_odd(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                int dim_domain, int sample_count, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x0dd));
    OddnessReport report;
    for (int s = 0; s < sample_count; ++s) {
        const Eigen::VectorXd x = random_sphere_point(dim_domain, rng).coords;
        const double v = (f(-x) + f(x)).norm();
        report.worst = std::max(report.worst, v);
    }
    report.pass = report.worst <= 1e-9;
    return report;
}

inline OddnessReport verify_odd(const OddMapSpace& f, int sample_count, std::uint64_t seed) {
    return verify_odd(f.fn(), f.dim_domain, sample_count, seed);
}

} // namespace pcode
