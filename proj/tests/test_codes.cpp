#include <catch2/catch_amalgamated.hpp>

#include "pcode/code.hpp"

using namespace pcode;
using Catch::Approx;

TEST_CASE("min distance and degeneracy", "[codes]") {
    ProjectiveCode ortho = circle_code(2);
    CHECK(min_distance(ortho) == Approx(kPi / 2));

    ProjectiveCode degenerate;
    degenerate.dim = 1;
    degenerate.lines = {circle_point(0.3), circle_point(0.3)};
    CHECK(min_distance(degenerate) == Approx(0.0).margin(1e-12));

    ProjectiveCode single;
    single.dim = 1;
    single.lines = {circle_point(0.0)};
    CHECK_THROWS_AS(min_distance(single), std::invalid_argument);
    CHECK_THROWS_AS(make_code({circle_point(0.3), circle_point(0.3)}), std::invalid_argument);
}

TEST_CASE("hypercube code", "[codes]") {
    ProjectiveCode c2 = hypercube_code(2);
    CHECK(c2.lines.size() == 2);
    CHECK(c2.min_distance == Approx(kPi / 2));

    ProjectiveCode c3 = hypercube_code(3);
    CHECK(c3.lines.size() == 4);
    CHECK(c3.min_distance == Approx(std::acos(1.0 / 3.0)));

    for (int d = 2; d <= 8; ++d) {
        ProjectiveCode c = hypercube_code(d);
        CHECK(c.lines.size() == (1u << (d - 1)));
        // exact value, strictly stronger than the arccos(1 - 1/d) guarantee
        CHECK(c.min_distance == Approx(std::acos(1.0 - 2.0 / d)).margin(1e-12));
        CHECK(c.min_distance >= std::acos(1.0 - 1.0 / d) - 1e-12);
        CHECK(min_distance(c) == Approx(c.min_distance).margin(1e-12));
    }
    CHECK_THROWS_AS(hypercube_code(1), std::invalid_argument);
    CHECK_THROWS_AS(hypercube_code(21), std::invalid_argument);
}

TEST_CASE("lattice code", "[codes]") {
    auto info31 = lattice_code_info(3, 1);
    CHECK(info31.shell_norm == 2);
    CHECK(info31.point_count == 12);
    CHECK(info31.code.lines.size() == 6);

    auto info32 = lattice_code_info(3, 2);
    CHECK(info32.point_count > 2);
    CHECK(info32.code.min_distance >= std::acos(11.0 / 12.0) - 1e-12);

    auto info42 = lattice_code_info(4, 2);
    CHECK(info42.point_count > 4); // n^{d-2} = 4

    // tie-break prefers the larger shell norm: {-1,0,1}^2 has 4 points each
    // at |x|^2 = 1 and |x|^2 = 2
    CHECK(lattice_code_info(2, 1).shell_norm == 2);

    // bound chain through the selected shell
    for (auto [d, n] : std::vector<std::pair<int, int>>{{3, 2}, {4, 2}, {3, 3}}) {
        auto info = lattice_code_info(d, n);
        const double shell_bound = std::acos(1.0 - 1.0 / info.shell_norm);
        const double global_bound = std::acos(1.0 - 1.0 / (d * n * n));
        CHECK(info.code.min_distance >= shell_bound - 1e-12);
        CHECK(shell_bound >= global_bound - 1e-12);
    }
    CHECK_THROWS_AS(lattice_code(9, 3), std::invalid_argument); // 7^9 > 1e7
}

TEST_CASE("600-cell code", "[codes]") {
    ProjectiveCode c = cell600_code();
    CHECK(c.lines.size() == 60);
    CHECK(c.min_distance == Approx(kPi / 5).margin(1e-9));
    for (const auto& x : c.lines) CHECK(x.coords.norm() == Approx(1.0).margin(1e-12));
    CHECK(thickening_scale(c) == Approx(4 * kPi / 5).margin(1e-9));
}

TEST_CASE("icosahedron code", "[codes]") {
    ProjectiveCode c = icosahedron_code();
    REQUIRE(c.lines.size() == 6);
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double alpha = std::acos(phi / (1.0 + phi * phi));
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j)
            CHECK(projective_distance(c.lines[i], c.lines[j]) == Approx(alpha).margin(1e-9));
    CHECK(c.min_distance == Approx(std::acos(1.0 / std::sqrt(5.0))).margin(1e-9));
}

TEST_CASE("circle code", "[codes]") {
    CHECK(circle_code(2).min_distance == Approx(kPi / 2));
    CHECK(circle_code(3).min_distance == Approx(kPi / 3));
    CHECK(circle_code(4).min_distance == Approx(kPi / 4));
    CHECK_THROWS_AS(circle_code(1), std::invalid_argument);
}

TEST_CASE("thickening scale", "[codes]") {
    ProjectiveCode ortho = make_code({SpherePoint{Eigen::Vector3d{1, 0, 0}},
                                      SpherePoint{Eigen::Vector3d{0, 1, 0}},
                                      SpherePoint{Eigen::Vector3d{0, 0, 1}}});
    CHECK(thickening_scale(ortho) == Approx(kPi / 2));
    CHECK(thickening_scale(circle_code(3)) == Approx(2 * kPi / 3));
}

TEST_CASE("bukh-cox reference", "[codes]") {
    CHECK(bukh_cox_reference(100, 1) == Approx(std::acos(2.0 * std::sqrt(2.0) / 100.0)));
    CHECK_THROWS_AS(bukh_cox_reference(2, 1), std::invalid_argument);
    double prev = 0.0;
    for (int d = 10; d <= 1000; d *= 2) {
        const double v = bukh_cox_reference(d, 1);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(prev == Approx(kPi / 2).margin(0.01));
}

TEST_CASE("search on the projective line", "[codes][search]") {
    SearchOptions opts;
    opts.restarts = 8;
    opts.max_iterations = 3000;
    opts.seed = 11;
    ProjectiveCode c = search_code(1, 5, opts);
    CHECK(c.min_distance == Approx(kPi / 5).margin(1e-3));
    CHECK(min_distance(c) == Approx(c.min_distance).margin(1e-12));
}

TEST_CASE("search finds orthogonal pair in RP^3", "[codes][search]") {
    SearchOptions opts;
    opts.restarts = 4;
    opts.max_iterations = 4000;
    opts.seed = 3;
    ProjectiveCode c = search_code(3, 2, opts);
    CHECK(c.min_distance == Approx(kPi / 2).margin(1e-6));
}

TEST_CASE("search is monotarily best-so-far", "[codes][search]") {
    // more restarts can only improve the certified value
    SearchOptions few, many;
    few.restarts = 2;
    many.restarts = 6;
    few.max_iterations = many.max_iterations = 1500;
    few.seed = many.seed = 17;
    const double a = search_code(2, 4, few).min_distance;
    const double b = search_code(2, 4, many).min_distance;
    CHECK(b >= a - 1e-12);
}

TEST_CASE("packing lower bound helper", "[codes]") {
    CHECK(packing_lower_bound(1, 4) == Approx(kPi / 4));
    CHECK(packing_lower_bound(3, 2) == Approx(kPi / 2));
    CHECK(packing_lower_bound(2, 6) == Approx(std::acos(1.0 / std::sqrt(5.0))));
}

TEST_CASE("canonical representatives", "[codes]") {
    for (const auto& code : {hypercube_code(4), cell600_code(), icosahedron_code()}) {
        for (const auto& x : code.lines) {
            int lead = 0;
            while (lead <= x.dim && std::abs(x.coords[lead]) <= 1e-9) ++lead;
            REQUIRE(lead <= x.dim);
            CHECK(x.coords[lead] > 0.0);
        }
    }
}
