#include <catch2/catch_amalgamated.hpp>

#include "pcode/partition.hpp"

using namespace pcode;
using Catch::Approx;

namespace {

Mass cloud_on_sphere(int d, int atoms, std::uint64_t seed, double weight = 1.0) {
    Rng rng(seed);
    Eigen::MatrixXd pts(atoms, d + 1);
    for (int i = 0; i < atoms; ++i) pts.row(i) = random_sphere_point(d, rng).coords.transpose();
    return make_mass(std::move(pts), Eigen::VectorXd::Constant(atoms, weight));
}

Mass symmetric_cloud(int d, int pairs, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd pts(2 * pairs, d + 1);
    for (int i = 0; i < pairs; ++i) {
        const Eigen::VectorXd x = random_sphere_point(d, rng).coords;
        pts.row(2 * i) = x.transpose();
        pts.row(2 * i + 1) = -x.transpose();
    }
    return make_mass(std::move(pts), Eigen::VectorXd::Ones(2 * pairs));
}

Mass disk_cloud(int ball_dim, int atoms, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd pts(atoms, ball_dim);
    for (int i = 0; i < atoms; ++i) {
        Eigen::VectorXd x(ball_dim);
        do {
            for (int c = 0; c < ball_dim; ++c) x[c] = rng.uniform(-1.0, 1.0);
        } while (x.norm() > 1.0);
        pts.row(i) = x.transpose();
    }
    return make_mass(std::move(pts), Eigen::VectorXd::Ones(atoms));
}

Eigen::VectorXd direction2(double angle) {
    Eigen::VectorXd p(2);
    p << std::cos(angle), std::sin(angle);
    return p;
}

} // namespace

TEST_CASE("halfspace mass basics", "[partition]") {
    // atoms at e1, e2, -e1 with unit weights
    Eigen::MatrixXd pts(3, 2);
    pts << 1, 0, 0, 1, -1, 0;
    Mass m = make_mass(pts, Eigen::VectorXd::Ones(3));

    CHECK(halfspace_mass(m, direction2(0.0)) == Approx(1.0 + 0.5)); // e1 in, e2 on boundary
    CHECK(halfspace_mass(m, direction2(kPi / 2)) == Approx(1.0 + 0.5 + 0.5));

    Mass sym = symmetric_cloud(1, 5, 3);
    for (double a : {0.1, 0.7, 2.3})
        CHECK(halfspace_mass(sym, direction2(a)) == Approx(sym.total / 2));

    Eigen::MatrixXd one(1, 2);
    one << 0.6, 0.4;
    Mass strict = make_mass(one, Eigen::VectorXd::Ones(1));
    CHECK(halfspace_mass(strict, direction2(0.2)) == strict.total);

    Eigen::VectorXd nonunit(2);
    nonunit << 2.0, 0.0;
    CHECK_THROWS_AS(halfspace_mass(m, nonunit), std::invalid_argument);
}

TEST_CASE("halfspace masses of opposite directions sum to the total", "[partition][property]") {
    Rng rng(12);
    Mass m = cloud_on_sphere(2, 50, 77);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::VectorXd p = random_sphere_point(2, rng).coords;
        CHECK(halfspace_mass(m, p) + halfspace_mass(m, Eigen::VectorXd(-p)) == Approx(m.total));
    }
}

TEST_CASE("bisection residual is exactly odd", "[partition]") {
    // include an atom exactly on the hyperplane of e2
    Eigen::MatrixXd pts(3, 2);
    pts << 1, 0, 0, 1, 0.3, -0.7;
    Mass m = make_mass(pts, Eigen::VectorXd::Ones(3));
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::VectorXd p = random_sphere_point(1, rng).coords;
        CHECK(bisection_residual(m, Eigen::VectorXd(-p)) == -bisection_residual(m, p));
    }
    // boundary atom contributes zero either way
    CHECK(bisection_residual(m, direction2(kPi / 2)) ==
          -bisection_residual(m, direction2(3 * kPi / 2)));

    Mass inside = make_mass(pts.topRows(1), Eigen::VectorXd::Ones(1));
    CHECK(bisection_residual(inside, direction2(0.0)) == inside.total);
    CHECK(bisection_residual(symmetric_cloud(1, 4, 5), direction2(1.0)) == Approx(0.0));
}

TEST_CASE("ham sandwich on the circle matches the sweep oracle", "[partition]") {
    Mass m = cloud_on_sphere(1, 31, 1234);
    SearchOptions opts;
    opts.restarts = 6;
    opts.max_iterations = 2400;
    opts.seed = 5;
    HamResult r = solve_ham_sandwich({m}, opts);
    REQUIRE(r.success);
    CHECK(std::abs(r.residuals[0]) <= r.tolerance);

    // oracle: sweep directions perpendicular to each atom; the best
    // achievable imbalance over the sweep bounds what the solver may claim
    double oracle = 1e300;
    for (int i = 0; i < m.points.rows(); ++i) {
        const double a = std::atan2(m.points(i, 1), m.points(i, 0));
        for (double eps : {1e-6, -1e-6})
            oracle = std::min(oracle,
                              std::abs(bisection_residual(m, direction2(a + kPi / 2 + eps))));
    }
    CHECK(std::abs(r.residuals[0]) <= oracle + 1.0 + 1e-9);
}

TEST_CASE("ham sandwich bisects two clouds on the 2-sphere", "[partition]") {
    SearchOptions opts;
    opts.restarts = 6;
    opts.max_iterations = 2400;
    opts.seed = 99;
    for (std::uint64_t seed : {10ull, 20ull}) {
        std::vector<Mass> masses = {cloud_on_sphere(2, 100, seed), cloud_on_sphere(2, 100, seed + 1)};
        HamResult r = solve_ham_sandwich(masses, opts);
        REQUIRE(r.success);
        for (int i = 0; i < 2; ++i) CHECK(std::abs(r.residuals[i]) <= 1.0 + 1e-9);
        // re-verify from the direction alone
        for (int i = 0; i < 2; ++i)
            CHECK(bisection_residual(masses[i], r.direction) == Approx(r.residuals[i]));
    }
    CHECK_THROWS_AS(solve_ham_sandwich({cloud_on_sphere(2, 5, 1)}, opts), std::invalid_argument);
}

TEST_CASE("centrally symmetric masses are bisected by anything", "[partition]") {
    std::vector<Mass> masses = {symmetric_cloud(1, 6, 2)};
    SearchOptions opts;
    opts.restarts = 2;
    opts.max_iterations = 600;
    opts.seed = 3;
    HamResult r = solve_ham_sandwich(masses, opts);
    REQUIRE(r.success);
    CHECK(std::abs(r.residuals[0]) == Approx(0.0).margin(1e-12));

    // d = 2, two symmetric clouds: every direction bisects both exactly
    std::vector<Mass> two = {symmetric_cloud(2, 8, 5), symmetric_cloud(2, 11, 6)};
    HamResult r2 = solve_ham_sandwich(two, opts);
    REQUIRE(r2.success);
    CHECK(r2.residuals.cwiseAbs().maxCoeff() == Approx(0.0).margin(1e-12));
    Rng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::VectorXd p = random_sphere_point(2, rng).coords;
        CHECK(bisection_residual(two[0], p) == Approx(0.0).margin(1e-12));
        CHECK(bisection_residual(two[1], p) == Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("halving directions for three circle masses", "[partition]") {
    std::vector<Mass> masses = {cloud_on_sphere(1, 60, 41), cloud_on_sphere(1, 60, 42),
                                cloud_on_sphere(1, 60, 43)};
    SearchOptions opts;
    opts.restarts = 20;
    opts.max_iterations = 5000;
    opts.seed = 8;
    const double delta = 3 * kPi / 4;
    HalvingResult r = halving_directions(masses, delta, opts);
    REQUIRE(r.success);
    CHECK(r.diameter <= delta + 1e-3);
    CHECK(r.directions.size() <= 4);
    for (std::size_t i = 0; i < masses.size(); ++i) {
        const auto [lo, hi] = r.witnesses[i];
        CHECK(r.residual_table(static_cast<int>(i), lo) <= r.tolerance);
        CHECK(r.residual_table(static_cast<int>(i), hi) >= -r.tolerance);
    }
}

TEST_CASE("halving with n = d masses degenerates to ham sandwich", "[partition]") {
    std::vector<Mass> masses = {cloud_on_sphere(1, 41, 7)};
    SearchOptions opts;
    opts.restarts = 10;
    opts.max_iterations = 3000;
    opts.seed = 21;
    HalvingResult r = halving_directions(masses, 0.0, opts);
    REQUIRE(r.success);
    REQUIRE(r.directions.size() == 1);
    CHECK(std::abs(bisection_residual(masses[0], r.directions[0].coords)) <= r.tolerance);

    // symmetric masses: the certificate collapses to a single direction that
    // serves as both witnesses
    std::vector<Mass> sym = {symmetric_cloud(1, 5, 31), symmetric_cloud(1, 7, 32)};
    HalvingResult rs = halving_directions(sym, 0.5, opts);
    REQUIRE(rs.success);
    CHECK(rs.directions.size() == 1);
    CHECK(rs.diameter == 0.0);
    for (const auto& [lo, hi] : rs.witnesses) {
        CHECK(lo == hi);
        CHECK(std::abs(rs.residual_table(0, lo)) <= rs.tolerance);
    }
}

TEST_CASE("log bundle on one symmetric disk mass", "[partition]") {
    // centrally symmetric disk mass: every direction bisects exactly
    Rng rng(15);
    const int pairs = 20;
    Eigen::MatrixXd pts(2 * pairs, 2);
    for (int i = 0; i < pairs; ++i) {
        Eigen::VectorXd x(2);
        do {
            x[0] = rng.uniform(-1.0, 1.0);
            x[1] = rng.uniform(-1.0, 1.0);
        } while (x.norm() > 1.0);
        pts.row(2 * i) = x.transpose();
        pts.row(2 * i + 1) = -x.transpose();
    }
    std::vector<Mass> masses = {make_mass(pts, Eigen::VectorXd::Ones(2 * pairs))};
    SearchOptions opts;
    opts.restarts = 4;
    opts.max_iterations = 1500;
    opts.seed = 4;
    LogBundleResult r = solve_log_bundle(masses, 1.0, opts);
    REQUIRE(r.success);
    CHECK(r.partition.directions.size() == 1); // symmetric: one cut, k = 0
    CHECK(r.partition.residuals.cwiseAbs().maxCoeff() == Approx(0.0).margin(1e-9));
    CHECK(r.partition.times.front() == 0.0);
    CHECK(r.partition.times.back() == 1.0);
}

TEST_CASE("log bundle equipartitions three disk masses", "[partition]") {
    std::vector<Mass> masses = {disk_cloud(2, 80, 51), disk_cloud(2, 80, 52), disk_cloud(2, 80, 53)};
    SearchOptions opts;
    opts.restarts = 20;
    opts.max_iterations = 5000;
    opts.seed = 6;
    const double delta = 3 * kPi / 4;
    LogBundleResult r = solve_log_bundle(masses, delta, opts);
    REQUIRE(r.success);
    CHECK(r.partition.directions.size() <= 4); // k <= n = 3
    CHECK(r.direction_diameter <= delta + 1e-3);
    for (const auto& p : r.partition.directions) {
        CHECK(p.size() == 3);
        CHECK(p[2] == 0.0); // linear cuts stay in the embedding hyperplane
        CHECK(p.norm() == Approx(1.0).margin(1e-12));
    }
    // independent verification matches the solver's claim
    Eigen::VectorXd replay = verify_partition(masses, r.partition);
    CHECK((replay - r.partition.residuals).cwiseAbs().maxCoeff() <= 1e-9);
    for (std::size_t i = 0; i < masses.size(); ++i)
        CHECK(std::abs(replay[static_cast<int>(i)]) <= 0.01 * masses[i].total);
}

TEST_CASE("verify partition flags corruption", "[partition]") {
    std::vector<Mass> masses = {symmetric_cloud(1, 10, 61)};
    LogPartition trivial;
    trivial.times = {0.0, 1.0};
    Eigen::VectorXd dir(3);
    dir << 1.0, 0.0, 0.0;
    trivial.directions = {dir};
    Eigen::VectorXd res = verify_partition(masses, trivial);
    CHECK(res.cwiseAbs().maxCoeff() == Approx(0.0).margin(1e-12));

    // corrupt the direction so one side gets everything
    Mass lop = make_mass((Eigen::MatrixXd(2, 2) << 0.5, 0.3, 0.4, 0.2).finished(),
                         Eigen::VectorXd::Ones(2));
    Eigen::VectorXd skew(3);
    skew << 1.0, 0.8, 0.0;
    skew /= skew.norm();
    LogPartition bad;
    bad.times = {0.0, 1.0};
    bad.directions = {skew};
    CHECK(verify_partition({lop}, bad).cwiseAbs().maxCoeff() > 0.5);

    LogPartition malformed;
    malformed.times = {0.0, 0.5};
    malformed.directions = {dir};
    CHECK_THROWS_AS(verify_partition(masses, malformed), std::invalid_argument);
}

TEST_CASE("affine lift handles one extra mass", "[partition]") {
    // two masses on the line (d = 0 ball): affine cuts of D^1
    std::vector<Mass> masses = {disk_cloud(1, 30, 71), disk_cloud(1, 30, 72)};
    SearchOptions opts;
    opts.restarts = 12;
    opts.max_iterations = 3000;
    opts.seed = 14;
    LogBundleResult r = solve_log_bundle(masses, kPi, opts, /*affine_lift=*/true);
    REQUIRE(r.success);
    for (const auto& p : r.partition.directions) CHECK(p.size() == 2);
    Eigen::VectorXd replay = verify_partition(masses, r.partition);
    for (std::size_t i = 0; i < masses.size(); ++i)
        CHECK(std::abs(replay[static_cast<int>(i)]) <= r.tolerance);
}

TEST_CASE("mass construction validates", "[partition]") {
    Eigen::MatrixXd pts(2, 2);
    pts << 1, 0, 0, 1;
    CHECK_THROWS_AS(make_mass(pts, Eigen::VectorXd::Zero(2)), std::invalid_argument);
    CHECK_THROWS_AS(make_mass(pts, Eigen::VectorXd::Ones(3)), std::invalid_argument);
    Eigen::MatrixXd far(1, 2);
    far << 2.0, 0.0;
    CHECK_THROWS_AS(solve_log_bundle({make_mass(far, Eigen::VectorXd::Ones(1))}, 1.0),
                    std::invalid_argument);
}
