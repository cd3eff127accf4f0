#include <catch2/catch_amalgamated.hpp>

#include "pcode/capture.hpp"

using namespace pcode;
using Catch::Approx;

namespace {

SearchOptions quick(int restarts, int iterations, std::uint64_t seed) {
    SearchOptions o;
    o.restarts = restarts;
    o.max_iterations = iterations;
    o.seed = seed;
    return o;
}

double replay_residual(const OddMapSpace& f, const CapturedSet& cert, bool negate_atoms) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(f.dim_codomain);
    for (std::size_t i = 0; i < cert.atoms.size(); ++i) {
        const Eigen::VectorXd x =
            negate_atoms ? (-cert.atoms[i].coords).eval() : cert.atoms[i].coords;
        acc += cert.weights[static_cast<int>(i)] * f.eval(x);
    }
    return acc.norm();
}

} // namespace

TEST_CASE("zero capture at diameter zero: coordinate maps", "[capture]") {
    for (int d : {1, 2, 3}) {
        auto result = find_zero_capture(coordinate_map(d, d), 0.0, quick(6, 2500, 21));
        REQUIRE(result.success);
        CHECK(result.best.atoms.size() == 1);
        CHECK(result.best.residual <= 1e-6);
        CHECK(result.best.diameter == 0.0);
        // the zero set of the first d coordinates is the pole pair
        const Eigen::VectorXd& x = result.best.atoms[0].coords;
        CHECK(std::abs(std::abs(x[d]) - 1.0) <= 1e-5);
    }
}

TEST_CASE("zero capture at diameter zero: random linear odd map", "[capture]") {
    OddMapSpace f = random_odd_polynomial_map(2, 2, 1, 5);
    auto result = find_zero_capture(f, 0.0, quick(8, 2500, 33));
    REQUIRE(result.success);
    CHECK(result.best.residual <= 1e-6);
}

TEST_CASE("moment curve capture around the threshold, k = 1", "[capture]") {
    const double threshold = 2.0 * kPi / 3.0;
    OddMapSpace f = sm_map(1);

    auto above = find_zero_capture(f, threshold + 0.05, quick(16, 5000, 7));
    REQUIRE(above.success);
    CHECK(above.best.residual <= 1e-6);
    CHECK(above.best.diameter <= threshold + 0.05 + 1e-6);
    CHECK(above.best.atoms.size() <= 3);

    auto below = find_zero_capture(f, threshold - 0.05, quick(16, 5000, 7));
    CHECK_FALSE(below.success);
    CHECK(below.best.residual >= 1e-3);
}

TEST_CASE("capture certificates replay", "[capture]") {
    OddMapSpace f = sm_map(1);
    const double delta = 2.0 * kPi / 3.0 + 0.1;
    auto result = find_zero_capture(f, delta, quick(12, 5000, 13));
    REQUIRE(result.success);

    // monotonicity: the same certificate is valid at any larger budget
    for (double larger : {delta + 0.1, delta + 0.5, kPi}) {
        CHECK(result.best.diameter <= larger + 1e-6);
        CHECK(replay_residual(f, result.best, false) == Approx(result.best.residual).margin(1e-12));
    }

    // odd symmetry: negating the atoms preserves the residual exactly
    CHECK(replay_residual(f, result.best, true) == Approx(result.best.residual).margin(1e-12));
}

TEST_CASE("capture rejects invalid budgets", "[capture]") {
    CHECK_THROWS_AS(find_zero_capture(sm_map(1), -0.1), std::invalid_argument);
    CHECK_THROWS_AS(find_zero_capture(sm_map(1), kPi + 0.1), std::invalid_argument);
    SearchOptions bad;
    bad.restarts = 0;
    CHECK_THROWS_AS(find_zero_capture(sm_map(1), 1.0, bad), std::invalid_argument);
}

TEST_CASE("matching measure: even map is trivial", "[capture]") {
    auto even = [](const Eigen::VectorXd& x) {
        Eigen::VectorXd v(2);
        v << x[0] * x[0], x[1] * x[1];
        return v;
    };
    auto result = find_matching_measure(even, 2, 2, 0.0, quick(2, 500, 3));
    REQUIRE(result.capture.success);
    CHECK(result.capture.best.residual <= 1e-12);
    CHECK(result.capture.best.atoms.size() == 1);
}

TEST_CASE("matching measure: odd map reduces to zero capture", "[capture]") {
    OddMapSpace f = sm_map(1);
    auto fn = f.fn();
    const double delta = 2.0 * kPi / 3.0 + 0.1;
    auto result = find_matching_measure(fn, 1, 2, delta, quick(12, 5000, 19));
    REQUIRE(result.capture.success);
    // common point sum_i w_i f(a_i) has g-residual twice the f-residual
    CHECK(result.common_point.norm() == Approx(result.capture.best.residual / 2.0).margin(1e-9));
}

TEST_CASE("matching measure: random map on S^2 into R^5", "[capture][slow]") {
    // one desk-size instance; the acceptance suite runs the full contract
    Rng rng(2);
    auto f = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd v(5);
        v << std::sin(x[0] + 0.3), x[1] * x[2], std::cos(2.0 * x[0]) - 1.0, x[2], x[0] * x[0];
        return v;
    };
    const double delta = kPi - std::acos(1.0 / std::sqrt(5.0));
    auto result = find_matching_measure(f, 2, 5, delta, quick(24, 6000, 77));
    REQUIRE(result.capture.success);
    CHECK(result.capture.best.residual <= 1e-6);
    CHECK(result.capture.best.diameter <= delta + 1e-3);
    CHECK(result.capture.best.atoms.size() <= 6);
}

TEST_CASE("sm lemma verification", "[capture][sm]") {
    // below the threshold: arcs, origin outside
    auto r1 = verify_sm_lemma(1, 2.0 * kPi / 3.0 - 0.01, 200);
    CHECK_FALSE(r1.certificate.inside);
    CHECK_FALSE(r1.used_wrap_configuration);
    CHECK(r1.config_diameter <= 2.0 * kPi / 3.0 - 0.01 + 1e-12);

    auto r2 = verify_sm_lemma(2, 4.0 * kPi / 5.0 - 0.01, 200);
    CHECK_FALSE(r2.certificate.inside);

    // at the threshold: the wrap configuration captures exactly
    for (int k : {1, 2, 3}) {
        const double threshold = 2.0 * kPi * k / (2 * k + 1);
        auto at = verify_sm_lemma(k, threshold, 64);
        CHECK(at.used_wrap_configuration);
        CHECK(at.certificate.inside);
        CHECK(at.config_diameter == Approx(threshold).margin(1e-12));

        auto under = verify_sm_lemma(k, threshold - 0.011, 200);
        CHECK_FALSE(under.certificate.inside);
    }
}

TEST_CASE("sm lemma is rotation covariant", "[capture][sm][property]") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const double offset = rng.uniform(0.0, 2 * kPi);
        for (double diam : {2.0, 2.0 * kPi / 3.0, 2.2}) {
            auto base = verify_sm_lemma(1, diam, 90, 0.0);
            auto moved = verify_sm_lemma(1, diam, 90, offset);
            CHECK(base.certificate.inside == moved.certificate.inside);
        }
    }
}

TEST_CASE("symmetric configuration sums to zero", "[capture][sm]") {
    for (int k : {1, 2, 3}) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(2 * k);
        const auto angles = sm_symmetric_configuration(k);
        REQUIRE(angles.size() == static_cast<std::size_t>(2 * k + 1));
        for (double t : angles) acc += sm_curve(k, t);
        CHECK(acc.norm() <= 1e-12);

        std::vector<SpherePoint> pts;
        for (double t : angles) pts.push_back(circle_point(t));
        CHECK(set_diameter(pts) == Approx(2.0 * kPi * k / (2 * k + 1)).margin(1e-12));
    }
}

TEST_CASE("lsb witness: two closed semicircles", "[capture][lsb]") {
    std::vector<CoverSet> cover = {make_arc_cover(0.0, kPi), make_arc_cover(kPi, 2.0 * kPi)};
    auto report = lsb_witness(cover, 1, quick(8, 2000, 9));
    REQUIRE(report.kind == LsbReport::Kind::AntipodalWitness);
    const SpherePoint w = report.witness;
    CHECK(cover[report.set_index].contains(w));
    CHECK(cover[report.set_index].contains(antipode(w)));
}

TEST_CASE("lsb witness: three arcs violate the diameter hypothesis", "[capture][lsb]") {
    std::vector<CoverSet> cover = {make_arc_cover(0.0, 2.0 * kPi / 3.0),
                                   make_arc_cover(2.0 * kPi / 3.0, 4.0 * kPi / 3.0),
                                   make_arc_cover(4.0 * kPi / 3.0, 2.0 * kPi)};
    auto report = lsb_witness(cover, 1, quick(8, 2000, 9));
    REQUIRE(report.kind == LsbReport::Kind::HypothesisViolation);
    CHECK(report.threshold == Approx(2.0 * kPi / 3.0));
    CHECK(report.violating_diameter <= report.threshold + 1e-9);
    // the violating subset really is in no single set
    for (const auto& set : cover) {
        bool all = true;
        for (const auto& p : report.violating_subset)
            if (!set.contains(p)) { all = false; break; }
        CHECK_FALSE(all);
    }
}

TEST_CASE("lsb witness: a full-diameter set yields an immediate witness", "[capture][lsb]") {
    // first set covers everything, second is a token sliver
    std::vector<CoverSet> cover = {make_arc_cover(0.0, 2.0 * kPi), make_arc_cover(0.0, 0.1)};
    auto report = lsb_witness(cover, 1, quick(4, 500, 5));
    REQUIRE(report.kind == LsbReport::Kind::AntipodalWitness);
    CHECK(report.set_index == 0);
}

TEST_CASE("lsb witness rejects undersized covers", "[capture][lsb]") {
    std::vector<CoverSet> one = {make_arc_cover(0.0, 2.0 * kPi)};
    CHECK_THROWS_AS(lsb_witness(one, 1), std::invalid_argument);
}

namespace {

CoverSet make_cap_cover(const SpherePoint& center, double radius) {
    CoverSet set;
    set.contains = [center, radius](const SpherePoint& x) {
        return geodesic_distance(x, center) <= radius;
    };
    set.distance = [center, radius](const SpherePoint& x) {
        return std::max(0.0, geodesic_distance(x, center) - radius);
    };
    return set;
}

CoverSet make_sector_cover(double lo, double width) {
    // closed longitude sector of S^2 of the given angular width
    auto in = [lo, width](const SpherePoint& x) {
        double t = std::atan2(x.coords[1], x.coords[0]) - lo;
        t = std::fmod(t, 2.0 * kPi);
        if (t < 0.0) t += 2.0 * kPi;
        return t <= width + 1e-12;
    };
    CoverSet set;
    set.contains = in;
    set.distance = [in](const SpherePoint& x) { return in(x) ? 0.0 : 0.5; };
    return set;
}

} // namespace

TEST_CASE("lsb witness on the 2-sphere", "[capture][lsb]") {
    // three wide longitude sectors: a sector of width > pi holds antipodal pairs
    std::vector<CoverSet> sectors = {make_sector_cover(0.0, 1.2 * kPi),
                                     make_sector_cover(0.6 * kPi, 1.2 * kPi),
                                     make_sector_cover(1.2 * kPi, 1.2 * kPi)};
    auto wit = lsb_witness(sectors, 2, quick(4, 1000, 3));
    REQUIRE(wit.kind == LsbReport::Kind::AntipodalWitness);
    CHECK(sectors[wit.set_index].contains(wit.witness));
    CHECK(sectors[wit.set_index].contains(antipode(wit.witness)));

    // four caps around the tetrahedron vertices cover the sphere but leave
    // small-diameter straddling pairs in no single cap
    const double s = 1.0 / std::sqrt(3.0);
    std::vector<SpherePoint> centers = {
        SpherePoint{Eigen::Vector3d{s, s, s}}, SpherePoint{Eigen::Vector3d{s, -s, -s}},
        SpherePoint{Eigen::Vector3d{-s, s, -s}}, SpherePoint{Eigen::Vector3d{-s, -s, s}}};
    std::vector<CoverSet> caps;
    for (const auto& c : centers) caps.push_back(make_cap_cover(c, 1.25));
    auto vio = lsb_witness(caps, 2, quick(4, 1000, 3));
    REQUIRE(vio.kind == LsbReport::Kind::HypothesisViolation);
    CHECK(vio.violating_diameter <= vio.threshold + 1e-9);
    for (const auto& cap : caps) {
        bool all = true;
        for (const auto& p : vio.violating_subset)
            if (!cap.contains(p)) { all = false; break; }
        CHECK_FALSE(all);
    }
}
