#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "majorize/majorize.hpp"

using namespace majorize;

namespace {

AbelianFamily diagonal_family(const std::vector<std::vector<double>>& cols) {
    std::vector<ComplexMatrix> members;
    for (const auto& c : cols) members.push_back(ComplexMatrix::diagonal(c));
    return AbelianFamily(std::move(members));
}

/// Constant field repeating one family.
MatrixField constant_field(const GridSpace& g, const AbelianFamily& f) {
    std::vector<AbelianFamily> fams(g.size(), f);
    return MatrixField(g, std::move(fams));
}

/// n = 2 diagonal field with well-separated, slowly varying bands; the slot
/// order never crosses, so eigenvector tracking is the identity.
MatrixField banded_field(const GridSpace& g, double lo, double hi) {
    std::vector<AbelianFamily> fams;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double x = g.coordinate(k);
        fams.push_back(diagonal_family({{hi + 0.2 * std::sin(x), lo + 0.2 * std::cos(x)}}));
    }
    return MatrixField(g, std::move(fams));
}

DSField symmetric_ds_field(const GridSpace& g, const std::vector<double>& f) {
    std::vector<DoublyStochastic> xs;
    for (std::size_t k = 0; k < g.size(); ++k)
        xs.emplace_back(2, std::vector<double>{f[k], 1.0 - f[k], 1.0 - f[k], f[k]});
    return DSField(g, std::move(xs));
}

/// A = X * (eigen data of B), built per point in slot order.
MatrixField apply_ds_field(const DSField& x, const MatrixField& b) {
    std::vector<AbelianFamily> fams;
    for (std::size_t k = 0; k < b.points(); ++k) {
        std::vector<std::vector<double>> cols;
        for (std::size_t j = 0; j < b.m(); ++j) {
            std::vector<double> col(b.n());
            for (std::size_t i = 0; i < b.n(); ++i) col[i] = b.at(k).member(j)(i, i).real();
            cols.push_back(x.at(k).apply(col));
        }
        fams.push_back(diagonal_family(cols));
    }
    return MatrixField(b.space(), std::move(fams));
}

}  // namespace

TEST_CASE("pointwise check on constant identical fields", "[fields]") {
    Rng rng(8);
    GridSpace g = GridSpace::interval(0.0, 1.0, 0.1);
    MatrixField f = constant_field(g, testgen::random_family(3, 2, rng));
    auto result = pointwise_majorization_check(f, f);
    CHECK(result.majorized);
    REQUIRE(result.witnesses.has_value());
    for (std::size_t k = 0; k < g.size(); ++k)
        CHECK(result.witnesses->at(k).frobenius_distance(DoublyStochastic::identity(3)) < 1e-6);
}

TEST_CASE("pointwise check passes on the demo pairs", "[fields]") {
    GridSpace g = GridSpace::interval(-1.0, 1.0, 0.01);
    SECTION("selection-gap pair at all 201 points") {
        auto result =
            pointwise_majorization_check(selection_gap_field_a(g), selection_gap_field_b(g));
        CHECK(result.majorized);
        CHECK(g.size() == 201);
    }
    SECTION("rotating pair at all points") {
        auto result =
            pointwise_majorization_check(rotating_pair_field_a(g), rotating_pair_field_b(g));
        CHECK(result.majorized);
    }
}

TEST_CASE("pointwise check reports failing points", "[fields]") {
    GridSpace g = GridSpace::interval(-1.0, 1.0, 0.25);
    // swap the roles: B is strictly below A away from sin^2 = cos^2
    auto result =
        pointwise_majorization_check(rotating_pair_field_b(g), rotating_pair_field_a(g));
    CHECK_FALSE(result.majorized);
    CHECK_FALSE(result.failures.empty());
    CHECK_FALSE(result.witnesses.has_value());
}

TEST_CASE("space mismatch is rejected", "[fields]") {
    GridSpace g1 = GridSpace::interval(-1.0, 1.0, 0.5);
    GridSpace g2 = GridSpace::interval(-1.0, 1.0, 0.25);
    CHECK_THROWS_AS(
        pointwise_majorization_check(selection_gap_field_a(g1), selection_gap_field_b(g2)),
        Error);
}

TEST_CASE("tracial field refuter", "[fields][tracial]") {
    GridSpace g = GridSpace::interval(-1.0, 1.0, 0.25);
    SECTION("certified fields are never refuted") {
        auto a = rotating_pair_field_a(g);
        auto b = rotating_pair_field_b(g);
        CHECK_FALSE(tracial_field_refuter(a, b, 150, 0).has_value());
    }
    SECTION("identical fields are never refuted") {
        auto a = selection_gap_field_a(g);
        CHECK_FALSE(tracial_field_refuter(a, a, 150, 0).has_value());
    }
    SECTION("a reversed pair is refuted at some point") {
        auto a = rotating_pair_field_a(g);
        auto b = rotating_pair_field_b(g);
        auto hit = tracial_field_refuter(b, a, 300, 0);
        REQUIRE(hit.has_value());
        // sound at the reported point
        EigenColumns eb = joint_diagonalize(b.at(hit->first), 0);
        EigenColumns ea = joint_diagonalize(a.at(hit->first), 0);
        CHECK(trace_of_function(eb, hit->second) > trace_of_function(ea, hit->second) + 1e-9);
    }
}

TEST_CASE("continuation probe on constant fields is flat", "[fields][probe]") {
    Rng rng(14);
    GridSpace g = GridSpace::interval(0.0, 1.0, 0.05);
    MatrixField f = constant_field(g, testgen::random_family(2, 1, rng));
    auto probe = continuation_ds_probe(f, f);
    CHECK(probe.max_jump <= 1e-8);
}

TEST_CASE("continuation probe exhibits the selection gap", "[fields][probe]") {
    GridSpace g = GridSpace::interval(-1.0, 1.0, 0.01);
    auto probe = continuation_ds_probe(selection_gap_field_a(g), selection_gap_field_b(g));
    CHECK(probe.max_jump == Approx(2.0).margin(1e-6));
    // the flip happens at the pair straddling x = 0
    CHECK(std::abs(g.coordinate(probe.jump_from)) <= 0.011);
    CHECK(std::abs(g.coordinate(probe.jump_to)) <= 0.011);
}

TEST_CASE("continuation probe tracks a supplied witness field", "[fields][probe]") {
    GridSpace g = GridSpace::interval(-1.0, 1.0, 0.02);
    MatrixField b = banded_field(g, 1.0, 5.0);
    // keep f above 1/2 so the mixed slots never cross and the tracked
    // presentation coincides with the slot presentation the field was built in
    std::vector<double> f(g.size());
    for (std::size_t k = 0; k < g.size(); ++k)
        f[k] = 0.75 + 0.2 * std::sin(2.0 * g.coordinate(k));
    DSField x = symmetric_ds_field(g, f);
    MatrixField a = apply_ds_field(x, b);

    auto probe = continuation_ds_probe(a, b, 0, &x);
    CHECK(probe.max_jump <= x.max_consecutive_jump() + 1e-6);
    // the witnesses reproduce the supplied field
    for (std::size_t k = 0; k < g.size(); ++k)
        CHECK(probe.ds_field.at(k).frobenius_distance(x.at(k)) < 1e-9);
}

TEST_CASE("continuation probe rejects non-majorized fields", "[fields][probe]") {
    GridSpace g = GridSpace::interval(-1.0, 1.0, 0.25);
    CHECK_THROWS_AS(
        continuation_ds_probe(rotating_pair_field_b(g), rotating_pair_field_a(g)),
        Error);
}

TEST_CASE("exact two-by-two mixture field", "[fields][exact2x2]") {
    GridSpace g = GridSpace::interval(-1.0, 1.0, 0.1);
    SECTION("identity witness on identical fields") {
        MatrixField b = banded_field(g, 1.0, 5.0);
        DSField x = symmetric_ds_field(g, std::vector<double>(g.size(), 1.0));
        MixtureField mf = exact_mixture_field_2x2(b, b, x);
        CHECK(field_mixture_residual(mf, b, b) <= 1e-10);
        CHECK(mf.weights()[0] == 0.5);
        CHECK(mf.weights()[1] == 0.5);
    }
    SECTION("flat witness averages the bands") {
        MatrixField b = banded_field(g, 1.0, 5.0);
        DSField x = symmetric_ds_field(g, std::vector<double>(g.size(), 0.5));
        MatrixField a = apply_ds_field(x, b);
        MixtureField mf = exact_mixture_field_2x2(a, b, x);
        CHECK(field_mixture_residual(mf, a, b) <= 1e-10);
        // theta = pi/4 rotations
        const double c = std::cos(3.14159265358979323846 / 4.0);
        CHECK(std::abs(mf.unitary(0, 0).matrix()(0, 0)) == Approx(c).margin(1e-9));
    }
    SECTION("a varying continuous witness field certifies exactly") {
        MatrixField b = banded_field(g, -2.0, 3.0);
        std::vector<double> f(g.size());
        for (std::size_t k = 0; k < g.size(); ++k)
            f[k] = 0.5 + 0.5 * std::cos(g.coordinate(k));
        DSField x = symmetric_ds_field(g, f);
        MatrixField a = apply_ds_field(x, b);
        MixtureField mf = exact_mixture_field_2x2(a, b, x);
        CHECK(field_mixture_residual(mf, a, b) <= 1e-8);
        // one declared cell per grid point
        CHECK(mf.cells().size() == g.size());
    }
    SECTION("wrong dimension is rejected") {
        GridSpace g2 = GridSpace::interval(-1.0, 1.0, 0.5);
        auto a3 = rotating_pair_field_a(g2);
        auto b3 = rotating_pair_field_b(g2);
        DSField x(g2, std::vector<DoublyStochastic>(g2.size(), DoublyStochastic::identity(3)));
        CHECK_THROWS_AS(exact_mixture_field_2x2(a3, b3, x), Error);
    }
    SECTION("a non-witness is rejected") {
        MatrixField b = banded_field(g, 1.0, 5.0);
        DSField flat = symmetric_ds_field(g, std::vector<double>(g.size(), 0.5));
        DSField ident = symmetric_ds_field(g, std::vector<double>(g.size(), 1.0));
        MatrixField a = apply_ds_field(flat, b);
        CHECK_THROWS_AS(exact_mixture_field_2x2(a, b, ident), Error);
    }
}

TEST_CASE("approximate hull membership on constant fields", "[fields][hull]") {
    Rng rng(90);
    GridSpace g = GridSpace::interval(0.0, 1.0, 0.1);
    MatrixField f = constant_field(g, testgen::random_family(3, 2, rng));
    auto result = approx_hull_membership(f, f, 0.1);
    CHECK(result.achieved_residual <= 1e-8);
    CHECK(result.mixture.terms() == 1);
    CHECK(result.mixture.cells().size() == 1);
}

TEST_CASE("approximate hull membership on the selection-gap pair", "[fields][hull]") {
    GridSpace g = GridSpace::interval(-1.0, 1.0, 0.005);
    REQUIRE(g.size() == 401);
    MatrixField a = selection_gap_field_a(g);
    MatrixField b = selection_gap_field_b(g);
    auto result = approx_hull_membership(a, b, 0.05);
    CHECK(result.achieved_residual <= 0.2);
    // single global weight vector
    double sum = 0.0;
    for (double w : result.mixture.weights().weights()) sum += w;
    CHECK(sum == Approx(1.0).margin(1e-10));
    // the only unitary-field boundary sits at the sign flip near x = 0
    for (std::size_t c = 1; c < result.mixture.cells().size(); ++c) {
        const std::size_t first = result.mixture.cells()[c].front();
        CHECK(std::abs(g.coordinate(first)) <= 0.05);
    }
}

TEST_CASE("residual stays below four epsilon across scales", "[fields][hull]") {
    GridSpace g = GridSpace::interval(-1.0, 1.0, 0.01);
    MatrixField a = selection_gap_field_a(g);
    MatrixField b = selection_gap_field_b(g);
    for (double eps : {0.2, 0.1, 0.05, 0.02}) {
        auto result = approx_hull_membership(a, b, eps);
        CHECK(result.achieved_residual <= 4.0 * eps);
    }
}

TEST_CASE("approximate certificate for the rotating pair", "[fields][hull]") {
    GridSpace g = GridSpace::interval(-1.0, 1.0, 0.01);
    MatrixField a = rotating_pair_field_a(g);
    MatrixField b = rotating_pair_field_b(g);
    for (double eps : {0.2, 0.1, 0.05}) {
        auto result = approx_hull_membership(a, b, eps);
        CHECK(result.achieved_residual <= 4.0 * eps);
    }
}

TEST_CASE("epsilon must be positive", "[fields][hull]") {
    GridSpace g = GridSpace::interval(0.0, 1.0, 0.5);
    Rng rng(5);
    MatrixField f = constant_field(g, testgen::random_family(2, 1, rng));
    CHECK_THROWS_AS(approx_hull_membership(f, f, 0.0), Error);
    CHECK_THROWS_AS(approx_hull_membership(f, f, -0.1), Error);
}

TEST_CASE("certified fields pass the pointwise check", "[fields][implication]") {
    Rng rng(60);
    GridSpace g = GridSpace::interval(-1.0, 1.0, 0.25);
    for (int trial = 0; trial < 100; ++trial) {
        MatrixField b = banded_field(g, rng.uniform(-3.0, -1.0), rng.uniform(1.0, 3.0));
        std::vector<double> f(g.size());
        const double phase = rng.uniform(0.0, 3.0);
        for (std::size_t k = 0; k < g.size(); ++k)
            f[k] = 0.5 + 0.45 * std::sin(g.coordinate(k) + phase);
        DSField x = symmetric_ds_field(g, f);
        MatrixField a = apply_ds_field(x, b);
        auto cert = approx_hull_membership(a, b, 0.2, trial);
        REQUIRE(cert.achieved_residual <= 0.8);
        CHECK(pointwise_majorization_check(a, b, trial).majorized);
    }
}

TEST_CASE("demo reports reproduce the counterexample numbers", "[fields][demo]") {
    SECTION("selection gap demo") {
        DemoReport r = demo_counterexamples("prop31", 0.01, 0, 0.05);
        CHECK(r.pointwise_all);
        CHECK(r.max_jump == Approx(2.0).margin(1e-6));
        CHECK(std::abs(r.jump_from_x) <= 0.011);
        CHECK(std::abs(r.jump_to_x) <= 0.011);
        CHECK(r.cert_residual <= 0.2);
        CHECK_FALSE(r.ran_witness_field);
    }
    SECTION("rotating witness field demo") {
        DemoReport r = demo_counterexamples("prop33", 0.01, 0, 0.05);
        CHECK_FALSE(r.ran_pair);
        REQUIRE(r.ds_ok.size() == 201);
        for (std::size_t k = 0; k < r.xs.size(); ++k) {
            CHECK(r.ds_ok[k] == 1);
            const double sc = std::sin(r.xs[k]) * std::cos(r.xs[k]);
            if (std::abs(sc) > 1e-6) CHECK(r.us3_ok[k] == 0);
        }
    }
    SECTION("rotating pair demo") {
        DemoReport r = demo_counterexamples("cor34", 0.01, 0, 0.05);
        CHECK(r.ran_pair);
        CHECK(r.pointwise_all);
        CHECK(r.cert_residual <= 0.2);
        REQUIRE(r.ran_witness_field);
        for (std::size_t k = 0; k < r.xs.size(); ++k) {
            const double sc = std::sin(r.xs[k]) * std::cos(r.xs[k]);
            if (std::abs(sc) > 1e-6) CHECK(r.us3_ok[k] == 0);
        }
    }
    SECTION("unknown demo name") {
        CHECK_THROWS_AS(demo_counterexamples("prop99", 0.1), Error);
    }
}

TEST_CASE("csv series carry one row per grid point", "[fields][demo]") {
    DemoReport r = demo_counterexamples("cor34", 0.1, 0, 0.2);
    std::string csv = demo_csv(r);
    std::size_t lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == r.xs.size() + 1);  // header + data
    CHECK(csv.rfind("x,pointwise_ok,jump,cert_residual,ds_ok,us3_ok", 0) == 0);
}
