#pragma once

// The metric thickening of S^d as data: finitely supported probability
// measures with the 1-Wasserstein metric, linear extension of maps, and the
// measure-level constructions built from projective codes (crosspolytope
// map, covering components, basis-evaluation map, normalized moment-curve
// extension).

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "pcode/code.hpp"
#include "pcode/oddmap.hpp"
#include "pcode/sphere.hpp"

namespace pcode {

// Finitely supported probability measure on S^d. Atoms closer than 1e-12
// are merged by weight addition on construction; weights are normalized to
// sum exactly to 1.
struct FiniteMeasure {
    int dim = 0;
    std::vector<SpherePoint> atoms;
    Eigen::VectorXd weights;
    double support_diam = 0.0;
};

inline FiniteMeasure make_measure(std::vector<SpherePoint> atoms, std::vector<double> weights) {
    if (atoms.empty() || atoms.size() != weights.size())
        throw std::invalid_argument("make_measure: need matching nonempty atoms and weights");
    for (const auto& a : atoms) check_same_dim(atoms.front(), a, "make_measure");

    FiniteMeasure mu;
    mu.dim = atoms.front().dim;
    std::vector<double> w;
    double total = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (weights[i] < -1e-15) throw std::invalid_argument("make_measure: negative weight");
        const double wi = std::max(weights[i], 0.0);
        total += wi;
        bool merged = false;
        for (std::size_t j = 0; j < mu.atoms.size(); ++j) {
            if (geodesic_distance(mu.atoms[j], atoms[i]) <= 1e-12) {
                w[j] += wi;
                merged = true;
                break;
            }
        }
        if (!merged) {
            mu.atoms.push_back(atoms[i]);
            w.push_back(wi);
        }
    }
    if (!(total > 0.0)) throw std::invalid_argument("make_measure: weights sum to zero");
    mu.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<int>(w.size())) / total;
    mu.support_diam = mu.atoms.size() > 1 ? set_diameter(mu.atoms) : 0.0;
    return mu;
}

inline FiniteMeasure dirac(const SpherePoint& x) { return make_measure({x}, {1.0}); }

inline double support_diameter(const FiniteMeasure& mu) { return set_diameter(mu.atoms); }

inline FiniteMeasure antipode(const FiniteMeasure& mu) {
    std::vector<SpherePoint> atoms;
    std::vector<double> w;
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
        atoms.push_back(antipode(mu.atoms[i]));
        w.push_back(mu.weights[static_cast<int>(i)]);
    }
    return make_measure(std::move(atoms), std::move(w));
}

// Transport plan between two measures: flow(i, j) carries mass from source
// atom i to target atom j. Row sums match the source weights and column sums
// the target weights (within 1e-9).
struct TransportPlan {
    Eigen::MatrixXd flow;
    double cost = 0.0;
    Eigen::VectorXd source_potential; // optimal duals (u_i + v_j <= c_ij)
    Eigen::VectorXd target_potential;
};

namespace detail {

// Dense transportation simplex on the bipartite basis tree. Exact optimum
// for the desk scales this library targets (<= 64 x 64).
class TransportSimplex {
  public:
    TransportSimplex(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::MatrixXd& c)
        : a_(a), b_(b), c_(c), m_(static_cast<int>(a.size())), n_(static_cast<int>(b.size())),
          flow_(Eigen::MatrixXd::Zero(m_, n_)), basic_(m_, std::vector<char>(n_, 0)) {}

    TransportPlan solve() {
        northwest_init();
        const double tol = 1e-12 * (1.0 + c_.cwiseAbs().maxCoeff());
        const int bland_after = 50 * (m_ + n_);
        Eigen::VectorXd u(m_), v(n_);
        for (int it = 0; it < 100000; ++it) {
            compute_potentials(u, v);
            int ei = -1, ej = -1;
            double worst = -tol;
            if (it < bland_after) {
                for (int i = 0; i < m_; ++i)
                    for (int j = 0; j < n_; ++j)
                        if (!basic_[i][j] && c_(i, j) - u[i] - v[j] < worst) {
                            worst = c_(i, j) - u[i] - v[j];
                            ei = i;
                            ej = j;
                        }
            } else { // Bland's rule: first eligible cell, guarantees termination
                for (int i = 0; i < m_ && ei < 0; ++i)
                    for (int j = 0; j < n_; ++j)
                        if (!basic_[i][j] && c_(i, j) - u[i] - v[j] < -tol) {
                            ei = i;
                            ej = j;
                            break;
                        }
            }
            if (ei < 0) break; // optimal
            pivot(ei, ej);
        }
        TransportPlan plan;
        plan.flow = flow_;
        plan.cost = (flow_.array() * c_.array()).sum();
        compute_potentials(u, v);
        plan.source_potential = u;
        plan.target_potential = v;
        return plan;
    }

  private:
    void northwest_init() {
        Eigen::VectorXd ra = a_, rb = b_;
        int i = 0, j = 0;
        for (;;) {
            const double f = std::max(0.0, std::min(ra[i], rb[j]));
            flow_(i, j) = f;
            basic_[i][j] = 1;
            ra[i] -= f;
            rb[j] -= f;
            if (i == m_ - 1 && j == n_ - 1) break;
            if (ra[i] <= rb[j] && i < m_ - 1)
                ++i;
            else
                ++j;
        }
    }

    // Tree traversal from source 0 (u_0 = 0) along basic cells.
    void compute_potentials(Eigen::VectorXd& u, Eigen::VectorXd& v) const {
        std::vector<char> udone(m_, 0), vdone(n_, 0);
        u.setZero();
        v.setZero();
        udone[0] = 1;
        std::vector<int> stack = {0}; // sources as 0..m-1, sinks as m..m+n-1
        while (!stack.empty()) {
            const int node = stack.back();
            stack.pop_back();
            if (node < m_) {
                for (int j = 0; j < n_; ++j)
                    if (basic_[node][j] && !vdone[j]) {
                        v[j] = c_(node, j) - u[node];
                        vdone[j] = 1;
                        stack.push_back(m_ + j);
                    }
            } else {
                const int j = node - m_;
                for (int i = 0; i < m_; ++i)
                    if (basic_[i][j] && !udone[i]) {
                        u[i] = c_(i, j) - v[j];
                        udone[i] = 1;
                        stack.push_back(i);
                    }
            }
        }
    }

    // Path from source ei to sink ej through the basis tree; alternate -,+
    // along it, take theta = min flow over the - cells, and swap the basis.
    void pivot(int ei, int ej) {
        std::vector<int> parent(m_ + n_, -2);
        parent[ei] = -1;
        std::vector<int> queue = {ei};
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const int node = queue[q];
            if (node == m_ + ej) break;
            if (node < m_) {
                for (int j = 0; j < n_; ++j)
                    if (basic_[node][j] && parent[m_ + j] == -2) {
                        parent[m_ + j] = node;
                        queue.push_back(m_ + j);
                    }
            } else {
                const int j = node - m_;
                for (int i = 0; i < m_; ++i)
                    if (basic_[i][j] && parent[i] == -2) {
                        parent[i] = m_ + j;
                        queue.push_back(i);
                    }
            }
        }
        if (parent[m_ + ej] == -2)
            throw std::runtime_error("wasserstein1: disconnected transport basis");

        std::vector<std::pair<int, int>> minus_cells, plus_cells;
        int node = m_ + ej;
        bool minus = true; // the first path edge shares sink ej with the entering cell
        while (parent[node] != -1) {
            const int par = parent[node];
            const int i = node < m_ ? node : par;
            const int j = node < m_ ? par - m_ : node - m_;
            (minus ? minus_cells : plus_cells).emplace_back(i, j);
            minus = !minus;
            node = par;
        }
        double theta = 1e300;
        std::pair<int, int> leaving{-1, -1};
        for (const auto& cell : minus_cells)
            if (flow_(cell.first, cell.second) < theta) {
                theta = flow_(cell.first, cell.second);
                leaving = cell;
            }
        for (const auto& cell : minus_cells) flow_(cell.first, cell.second) -= theta;
        for (const auto& cell : plus_cells) flow_(cell.first, cell.second) += theta;
        flow_(ei, ej) = theta;
        basic_[ei][ej] = 1;
        basic_[leaving.first][leaving.second] = 0;
        flow_(leaving.first, leaving.second) = 0.0;
    }

    Eigen::VectorXd a_, b_;
    Eigen::MatrixXd c_;
    int m_, n_;
    Eigen::MatrixXd flow_;
    std::vector<std::vector<char>> basic_;
};

} // namespace detail

// Exact 1-Wasserstein distance with geodesic ground cost, plus an optimal
// plan. Inputs capped at 64 atoms per side.
inline std::pair<double, TransportPlan> wasserstein1(const FiniteMeasure& mu, const FiniteMeasure& nu) {
    if (mu.dim != nu.dim) throw std::invalid_argument("wasserstein1: dimension mismatch");
    const int m = static_cast<int>(mu.atoms.size());
    const int n = static_cast<int>(nu.atoms.size());
    if (m > 64 || n > 64) throw std::invalid_argument("wasserstein1: inputs capped at 64x64 atoms");
    Eigen::MatrixXd c(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = geodesic_distance(mu.atoms[i], nu.atoms[j]);
    detail::TransportSimplex solver(mu.weights, nu.weights, c);
    TransportPlan plan = solver.solve();
    return {plan.cost, std::move(plan)};
}

// Linear extension f(mu) = sum_i lambda_i f(x_i).
inline Eigen::VectorXd linear_extension(const std::function<Eigen::VectorXd(const SpherePoint&)>& f,
                                        const FiniteMeasure& mu) {
    Eigen::VectorXd acc = f(mu.atoms.front()) * mu.weights[0];
    for (std::size_t i = 1; i < mu.atoms.size(); ++i)
        acc += mu.weights[static_cast<int>(i)] * f(mu.atoms[i]);
    return acc;
}

inline Eigen::VectorXd linear_extension(const OddMapSpace& f, const FiniteMeasure& mu) {
    if (f.dim_domain != mu.dim) throw std::invalid_argument("linear_extension: dimension mismatch");
    return linear_extension([&f](const SpherePoint& x) { return f.eval(x); }, mu);
}

// The odd linear map from the l1 unit sphere of R^{n+1} into the thickening,
// induced by a code with n+1 lines: u maps to sum_j |u_j| dirac(sign(u_j) x_j).
// Support diameter is at most pi - min_distance(code).
inline FiniteMeasure crosspolytope_map(const ProjectiveCode& code, const Eigen::VectorXd& u) {
    if (u.size() != static_cast<int>(code.lines.size()))
        throw std::invalid_argument("crosspolytope_map: u must have one coordinate per line");
    if (std::abs(u.cwiseAbs().sum() - 1.0) > 1e-9)
        throw std::invalid_argument("crosspolytope_map: u is not on the l1 unit sphere");
    std::vector<SpherePoint> atoms;
    std::vector<double> w;
    for (int j = 0; j < u.size(); ++j) {
        if (u[j] == 0.0) continue;
        atoms.push_back(u[j] > 0.0 ? code.lines[j] : antipode(code.lines[j]));
        w.push_back(std::abs(u[j]));
    }
    return make_measure(std::move(atoms), std::move(w));
}

// Signed 1-Wasserstein distance from mu to the set of measures supported off
// the open ball B_delta(center), extended oddly. Closed form: each in-ball
// atom pays its distance to the ball boundary.
inline double covering_component(const FiniteMeasure& mu, const SpherePoint& center, double delta) {
    if (mu.dim != center.dim) throw std::invalid_argument("covering_component: dimension mismatch");
    const SpherePoint neg = antipode(center);
    double dplus = kPi, dminus = kPi;
    for (const auto& x : mu.atoms) {
        dplus = std::min(dplus, geodesic_distance(x, center));
        dminus = std::min(dminus, geodesic_distance(x, neg));
    }
    const bool hits_plus = dplus < delta;
    const bool hits_minus = dminus < delta;
    if (hits_plus && hits_minus)
        throw std::domain_error("covering_component: support meets both open balls");
    double acc = 0.0;
    if (!hits_minus) {
        for (std::size_t i = 0; i < mu.atoms.size(); ++i)
            acc += mu.weights[static_cast<int>(i)] *
                   std::max(0.0, delta - geodesic_distance(mu.atoms[i], center));
        return acc;
    }
    for (std::size_t i = 0; i < mu.atoms.size(); ++i)
        acc += mu.weights[static_cast<int>(i)] *
               std::max(0.0, delta - geodesic_distance(mu.atoms[i], neg));
    return -acc;
}

// Normalized vector of covering components: an odd map into S^{n-1} whenever
// the centers cover RP^d at radius delta (caller-asserted) and the support
// diameter stays within pi - 2 delta.
inline Eigen::VectorXd covering_map(const FiniteMeasure& mu, const std::vector<SpherePoint>& centers,
                                    double delta) {
    if (centers.empty()) throw std::invalid_argument("covering_map: no centers");
    if (support_diameter(mu) > kPi - 2.0 * delta + 1e-12)
        throw std::invalid_argument("covering_map: support diameter exceeds pi - 2 delta");
    Eigen::VectorXd f(static_cast<int>(centers.size()));
    for (std::size_t j = 0; j < centers.size(); ++j)
        f[static_cast<int>(j)] = covering_component(mu, centers[j], delta);
    const double n = f.norm();
    if (n < 1e-9)
        throw std::domain_error("covering_map: all components vanish (covering hypothesis fails here)");
    return f / n;
}

// Componentwise linear extension of a basis of odd functions.
inline Eigen::VectorXd index_bound_map(const OddMapSpace& basis, const FiniteMeasure& mu) {
    return linear_extension(basis, mu);
}

// Normalized linear extension of the symmetric moment curve on measures over
// S^1; defined whenever the extension stays away from the origin, which holds
// for supports of diameter below 2 pi k / (2k+1).
inline Eigen::VectorXd sm_sphere_map(int k, const FiniteMeasure& mu) {
    if (mu.dim != 1) throw std::invalid_argument("sm_sphere_map: measure must live on S^1");
    if (k < 1) throw std::invalid_argument("sm_sphere_map: k must be >= 1");
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(2 * k);
    for (std::size_t i = 0; i < mu.atoms.size(); ++i)
        acc += mu.weights[static_cast<int>(i)] * sm_curve(k, circle_angle(mu.atoms[i]));
    const double n = acc.norm();
    if (n < 1e-9) throw std::domain_error("sm_sphere_map: linear extension vanishes");
    return acc / n;
}

} // namespace pcode
