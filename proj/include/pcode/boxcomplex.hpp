#pragma once

// Box complexes, cone graphs, suspensions, and circular colorings. Signed
// complexes live on the vertex universe {+-1, ..., +-n} and are stored by
// their maximal faces; the swap v <-> -v is the Z/2 action. Faces of the box
// complex are the sets P u -N whose positive and negative parts span a
// complete bipartite subgraph; its maximal faces are exactly the closed
// pairs (P, CN(P)) of the common-neighborhood operator, which is what the
// enumeration below walks (2^n masks, guarded at n <= 16).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pcode/rng.hpp"
#include "pcode/search.hpp"
#include "pcode/sphere.hpp"

namespace pcode {

// Simple graph on vertices 1..n.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges; // u < v, 1-indexed
};

inline Graph make_graph(int n, std::vector<std::pair<int, int>> edges) {
    if (n < 1) throw std::invalid_argument("make_graph: need at least one vertex");
    Graph g;
    g.n = n;
    for (auto [u, v] : edges) {
        if (u == v) throw std::invalid_argument("make_graph: loops are not allowed");
        if (u < 1 || v < 1 || u > n || v > n)
            throw std::invalid_argument("make_graph: edge endpoint out of range");
        if (u > v) std::swap(u, v);
        g.edges.emplace_back(u, v);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

inline Graph cycle_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= n; ++i) e.emplace_back(i, i % n + 1);
    return make_graph(n, std::move(e));
}

inline Graph complete_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) e.emplace_back(i, j);
    return make_graph(n, std::move(e));
}

inline Graph path_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i < n; ++i) e.emplace_back(i, i + 1);
    return make_graph(n, std::move(e));
}

// Apex vertex n+1 joined to every vertex of G.
inline Graph cone_graph(const Graph& g) {
    std::vector<std::pair<int, int>> e = g.edges;
    for (int v = 1; v <= g.n; ++v) e.emplace_back(v, g.n + 1);
    return make_graph(g.n + 1, std::move(e));
}

// Simplicial complex on signed vertices +-1..+-n, stored by maximal faces.
// Z/2 closure: sigma a face implies -sigma a face.
struct SignedComplex {
    int n = 0;
    std::vector<std::vector<int>> maximal_faces;
};

namespace detail {

inline void canonicalize_faces(SignedComplex& k) {
    for (auto& f : k.maximal_faces) std::sort(f.begin(), f.end());
    std::sort(k.maximal_faces.begin(), k.maximal_faces.end());
    k.maximal_faces.erase(std::unique(k.maximal_faces.begin(), k.maximal_faces.end()),
                          k.maximal_faces.end());
}

} // namespace detail

// Box complex of G: faces P u -N with every (p, q), p in P, q in N an edge.
// Maximal faces are the closed pairs of the common-neighborhood operator.
inline SignedComplex box_complex(const Graph& g) {
    if (g.n > 16) throw std::invalid_argument("box_complex: vertex count capped at 16");
    std::vector<std::uint32_t> adj(g.n + 1, 0);
    for (auto [u, v] : g.edges) {
        adj[u] |= 1u << (v - 1);
        adj[v] |= 1u << (u - 1);
    }
    const std::uint32_t full = (1u << g.n) - 1;
    auto common_neighbors = [&](std::uint32_t set) {
        std::uint32_t cn = full;
        for (int v = 1; v <= g.n; ++v)
            if (set & (1u << (v - 1))) cn &= adj[v];
        return cn;
    };

    SignedComplex k;
    k.n = g.n;
    for (std::uint32_t p = 0; p <= full; ++p) {
        const std::uint32_t cn = common_neighbors(p);
        if (common_neighbors(cn) != p) continue; // not closed
        std::vector<int> face;
        for (int v = 1; v <= g.n; ++v) {
            if (p & (1u << (v - 1))) face.push_back(v);
            if (cn & (1u << (v - 1))) face.push_back(-v);
        }
        k.maximal_faces.push_back(std::move(face));
    }
    detail::canonicalize_faces(k);
    return k;
}

// Adds a pole pair +-(n+1); every face extends by either pole, never both.
inline SignedComplex suspension(const SignedComplex& k) {
    SignedComplex s;
    s.n = k.n + 1;
    const int pole = k.n + 1;
    for (const auto& f : k.maximal_faces) {
        std::vector<int> up = f, down = f;
        up.push_back(pole);
        down.push_back(-pole);
        s.maximal_faces.push_back(std::move(up));
        s.maximal_faces.push_back(std::move(down));
    }
    detail::canonicalize_faces(s);
    return s;
}

// Equality of the maximal-face families (hence of the complexes). Complexes
// over different universes are simply unequal.
inline bool complexes_equal(const SignedComplex& a, const SignedComplex& b) {
    if (a.n != b.n) return false;
    SignedComplex ca = a, cb = b;
    detail::canonicalize_faces(ca);
    detail::canonicalize_faces(cb);
    return ca.maximal_faces == cb.maximal_faces;
}

inline bool z2_closed(const SignedComplex& k) {
    SignedComplex neg = k;
    for (auto& f : neg.maximal_faces)
        for (auto& v : f) v = -v;
    return complexes_equal(k, neg);
}

// Positions on RP^1 (the circle of circumference pi) with the minimal edge
// distance m and the witnessed rate pi/m.
struct CircularColoring {
    std::vector<double> positions; // positions[v-1] in [0, pi)
    double quality = kPi;          // min over edges of the RP^1 distance
    double rate = 1.0;             // pi / quality
};

inline double rp1_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), kPi);
    return std::min(d, kPi - d);
}

inline double coloring_quality(const Graph& g, const std::vector<double>& positions) {
    if (static_cast<int>(positions.size()) != g.n)
        throw std::invalid_argument("coloring_quality: one position per vertex required");
    double m = kPi; // vacuous when there are no edges, giving rate 1
    for (auto [u, v] : g.edges) m = std::min(m, rp1_distance(positions[u - 1], positions[v - 1]));
    return m;
}

inline CircularColoring make_coloring(const Graph& g, std::vector<double> positions) {
    CircularColoring c;
    for (double& p : positions) {
        p = std::fmod(p, kPi);
        if (p < 0.0) p += kPi;
    }
    c.positions = std::move(positions);
    c.quality = coloring_quality(g, c.positions);
    c.rate = kPi / c.quality;
    return c;
}

inline bool coloring_valid_at_rate(const Graph& g, const CircularColoring& c, double rate,
                                   double tol = 1e-9) {
    return coloring_quality(g, c.positions) >= kPi / rate - tol;
}

namespace detail {

inline double chromatic_softmin_grad(const Graph& g, const std::vector<double>& pos, double beta,
                                     std::vector<double>& grad) {
    grad.assign(pos.size(), 0.0);
    if (g.edges.empty()) return kPi;
    double tmin = kPi;
    std::vector<double> theta(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        theta[e] = rp1_distance(pos[g.edges[e].first - 1], pos[g.edges[e].second - 1]);
        tmin = std::min(tmin, theta[e]);
    }
    double z = 0.0;
    std::vector<double> w(theta.size());
    for (std::size_t e = 0; e < theta.size(); ++e) {
        w[e] = std::exp(-beta * (theta[e] - tmin));
        z += w[e];
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto [u, v] = g.edges[e];
        double diff = std::fmod(pos[u - 1] - pos[v - 1], kPi);
        if (diff < 0.0) diff += kPi; // diff in [0, pi)
        // d theta / d pos_u: +1 on the short branch, -1 on the wrapped one
        const double sign = diff <= kPi / 2 ? 1.0 : -1.0;
        const double dir = diff == 0.0 ? 0.0 : sign;
        grad[u - 1] += (w[e] / z) * dir;
        grad[v - 1] -= (w[e] / z) * dir;
    }
    return tmin - std::log(z) / beta;
}

} // namespace detail

// Multi-restart soft-min ascent for the largest minimal edge distance on
// RP^1. The returned coloring always witnesses chi_c <= rate.
inline CircularColoring circular_chromatic_estimate(const Graph& g, const SearchOptions& opts = {}) {
    opts.validate();
    if (g.edges.empty()) return make_coloring(g, std::vector<double>(g.n, 0.0));

    std::vector<double> best_pos;
    double best_quality = -1.0;
    const std::vector<double> betas = {10.0, 40.0, 160.0, 640.0, 2000.0};
    for (int restart = 0; restart < opts.restarts; ++restart) {
        Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(restart)));
        std::vector<double> pos(g.n);
        for (auto& p : pos) p = rng.uniform(0.0, kPi);

        std::vector<double> grad;
        for (double beta : betas) {
            AdaptiveStep step(0.1, 1e-12);
            double value = detail::chromatic_softmin_grad(g, pos, beta, grad);
            const int iters = std::max(1, opts.max_iterations / static_cast<int>(betas.size()));
            for (int it = 0; it < iters; ++it) {
                std::vector<double> trial(pos);
                for (int v = 0; v < g.n; ++v) {
                    trial[v] = std::fmod(trial[v] + step.step * grad[v], kPi);
                    if (trial[v] < 0.0) trial[v] += kPi;
                }
                std::vector<double> tgrad;
                const double tvalue = detail::chromatic_softmin_grad(g, trial, beta, tgrad);
                if (tvalue >= value) {
                    pos.swap(trial);
                    grad.swap(tgrad);
                    value = tvalue;
                    step.accept();
                } else {
                    step.reject();
                    if (step.step <= 1e-11) break;
                }
            }
        }
        const double q = coloring_quality(g, pos);
        if (q > best_quality) {
            best_quality = q;
            best_pos = pos;
        }
    }
    return make_coloring(g, std::move(best_pos));
}

// The cone-coloring rescale: positions are rotated so the minimum sits at
// the identified point 0 ~ pi, every vertex position is scaled by
// r/(r+1), and the apex lands at r pi/(r+1). The result is returned with
// its recomputed quality; whether that meets rate r+1 is for the caller to
// check (it does whenever no rescaled vertex lands within pi/(r+1) of the
// apex zone).
inline CircularColoring extend_coloring_to_cone(const Graph& g, const CircularColoring& f) {
    if (static_cast<int>(f.positions.size()) != g.n)
        throw std::invalid_argument("extend_coloring_to_cone: coloring does not match the graph");
    for (double p : f.positions)
        if (!(p >= 0.0) || p >= kPi)
            throw std::invalid_argument("extend_coloring_to_cone: positions must lie in [0, pi)");
    const double claimed = coloring_quality(g, f.positions);
    if (std::abs(claimed - f.quality) > 1e-9)
        throw std::invalid_argument("extend_coloring_to_cone: corrupted coloring (stale quality)");

    const double r = f.rate;
    const double scale = r / (r + 1.0);
    double lo = kPi;
    for (double p : f.positions) lo = std::min(lo, p);

    std::vector<double> pos;
    for (double p : f.positions) pos.push_back(scale * (p - lo));
    pos.push_back(scale * kPi); // apex
    return make_coloring(cone_graph(g), std::move(pos));
}

// Chromatic lower bound from a coindex lower bound on the box complex:
// an odd map from S^{2k-1} forces chi_c >= 2k, and for cone graphs an odd
// map from S^{2k} forces chi_c >= 2k+1.
inline int simonyi_tardos_bound(int coindex_lower_bound, bool is_cone) {
    if (coindex_lower_bound < 0)
        throw std::invalid_argument("simonyi_tardos_bound: coindex bound must be >= 0");
    const int l = coindex_lower_bound;
    if (l % 2 == 1) return l + 1;
    return is_cone ? l + 1 : l;
}

} // namespace pcode
