#include <catch2/catch_amalgamated.hpp>

#include "pcode/hull.hpp"
#include "pcode/sphere.hpp"

using namespace pcode;
using Catch::Approx;

namespace {

std::vector<Eigen::VectorXd> pts(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& r : rows) {
        Eigen::VectorXd v(r.size());
        int i = 0;
        for (double x : r) v[i++] = x;
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace

TEST_CASE("origin in hull: antipodal pair", "[hull]") {
    auto cert = origin_in_hull(pts({{1, 0}, {-1, 0}}));
    REQUIRE(cert.inside);
    CHECK(cert.residual <= 1e-9);
    CHECK(cert.weights[0] == Approx(0.5).margin(1e-6));
    CHECK(cert.weights[1] == Approx(0.5).margin(1e-6));
}

TEST_CASE("origin in hull: separated pair", "[hull]") {
    auto cert = origin_in_hull(pts({{1, 0}, {0, 1}}));
    REQUIRE_FALSE(cert.inside);
    CHECK(cert.margin > 0.0);
    CHECK(cert.direction[0] == Approx(1.0 / std::sqrt(2.0)).margin(1e-6));
    CHECK(cert.direction[1] == Approx(1.0 / std::sqrt(2.0)).margin(1e-6));
}

TEST_CASE("origin in hull: symmetric triangle", "[hull]") {
    auto cert = origin_in_hull(pts({{1, 0},
                                    {std::cos(2 * kPi / 3), std::sin(2 * kPi / 3)},
                                    {std::cos(4 * kPi / 3), std::sin(4 * kPi / 3)}}));
    REQUIRE(cert.inside);
    for (int i = 0; i < 3; ++i) CHECK(cert.weights[i] == Approx(1.0 / 3.0).margin(1e-6));
    CHECK_THROWS_AS(origin_in_hull({}), std::invalid_argument);
}

TEST_CASE("hull distance", "[hull]") {
    CHECK(hull_distance(pts({{1, 0}})) == Approx(1.0));
    CHECK(hull_distance(pts({{1, 0}, {-1, 0}})) == Approx(0.0).margin(1e-10));
    CHECK(hull_distance(pts({{1, 1}, {1, -1}})) == Approx(1.0).margin(1e-9));
}

TEST_CASE("certificate soundness on random inputs", "[hull][property]") {
    Rng rng(505);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.bits() % 3);
        const int m = 1 + static_cast<int>(rng.bits() % 8);
        std::vector<Eigen::VectorXd> points;
        for (int i = 0; i < m; ++i) {
            Eigen::VectorXd v(n);
            for (int j = 0; j < n; ++j) v[j] = rng.normal();
            points.push_back(std::move(v));
        }
        auto cert = origin_in_hull(points);
        if (cert.inside) {
            Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
            double total = 0.0;
            int support = 0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                REQUIRE(cert.weights[static_cast<int>(i)] >= -1e-12);
                sum += cert.weights[static_cast<int>(i)] * points[i];
                total += cert.weights[static_cast<int>(i)];
                if (cert.weights[static_cast<int>(i)] > 0.0) ++support;
            }
            CHECK(sum.norm() <= 1e-9);
            CHECK(total == Approx(1.0).margin(1e-12));
            CHECK(support <= n + 1); // Caratheodory-pruned witness
        } else {
            CHECK(cert.margin > 0.0);
            for (const auto& p : points) CHECK(cert.direction.dot(p) >= cert.margin - 1e-12);
        }
    }
}

TEST_CASE("caratheodory pruning keeps the witness small", "[hull]") {
    // many points on a circle around the origin: inside, but <= 3 support points
    std::vector<Eigen::VectorXd> points;
    for (int i = 0; i < 40; ++i) {
        Eigen::VectorXd v(2);
        v << std::cos(i * 2 * kPi / 40), std::sin(i * 2 * kPi / 40);
        points.push_back(std::move(v));
    }
    auto cert = origin_in_hull(points);
    REQUIRE(cert.inside);
    int support = 0;
    for (int i = 0; i < cert.weights.size(); ++i)
        if (cert.weights[i] > 0.0) ++support;
    CHECK(support <= 3);
    CHECK(cert.residual <= 1e-9);
}
