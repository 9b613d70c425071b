#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "majorize/doubly_stochastic.hpp"
#include "majorize/errors.hpp"
#include "majorize/field_certify.hpp"
#include "majorize/field_checks.hpp"
#include "majorize/fields.hpp"

namespace majorize {

/// m = 1 pair on [-1, 1]: A(x) = diag(x, -x), B(x) = diag(|x|, -|x|).
/// Pointwise majorized everywhere, but no continuous witness selection exists;
/// the probe's jump of 2 across x = 0 exhibits the obstruction.
inline MatrixField selection_gap_field_a(const GridSpace& g) {
    std::vector<AbelianFamily> fams;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double x = g.coordinate(k);
        fams.emplace_back(std::vector<ComplexMatrix>{
            ComplexMatrix::diagonal(std::vector<double>{x, -x})});
    }
    return MatrixField(g, std::move(fams));
}

inline MatrixField selection_gap_field_b(const GridSpace& g) {
    std::vector<AbelianFamily> fams;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double x = std::abs(g.coordinate(k));
        fams.emplace_back(std::vector<ComplexMatrix>{
            ComplexMatrix::diagonal(std::vector<double>{x, -x})});
    }
    return MatrixField(g, std::move(fams));
}

/// The rotating 3x3 doubly stochastic field sin^2(x) I + cos^2(x) C, with C
/// the 3-cycle.  Doubly stochastic at every point yet non-unistochastic
/// wherever sin(x)cos(x) != 0, so it cannot be a finite convex combination of
/// continuous unistochastic fields.
inline DSField rotating_ds_field(const GridSpace& g) {
    std::vector<DoublyStochastic> values;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double s = std::sin(g.coordinate(k)) * std::sin(g.coordinate(k));
        const double c = 1.0 - s;
        values.emplace_back(3, std::vector<double>{s, c, 0.0, 0.0, s, c, c, 0.0, s});
    }
    return DSField(g, std::move(values));
}

/// The m = 2 pair certified by the rotating field: A1 = diag(sin^2, 0, cos^2),
/// A2 = diag(cos^2, sin^2, 0) against the constant B1 = E11, B2 = E22.
/// Continuously majorized, but no exact finite unitary mixture exists.
inline MatrixField rotating_pair_field_a(const GridSpace& g) {
    std::vector<AbelianFamily> fams;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double s = std::sin(g.coordinate(k)) * std::sin(g.coordinate(k));
        const double c = 1.0 - s;
        fams.emplace_back(std::vector<ComplexMatrix>{
            ComplexMatrix::diagonal(std::vector<double>{s, 0.0, c}),
            ComplexMatrix::diagonal(std::vector<double>{c, s, 0.0})});
    }
    return MatrixField(g, std::move(fams));
}

inline MatrixField rotating_pair_field_b(const GridSpace& g) {
    std::vector<AbelianFamily> fams;
    for (std::size_t k = 0; k < g.size(); ++k) {
        fams.emplace_back(std::vector<ComplexMatrix>{
            ComplexMatrix::diagonal(std::vector<double>{1.0, 0.0, 0.0}),
            ComplexMatrix::diagonal(std::vector<double>{0.0, 1.0, 0.0})});
    }
    return MatrixField(g, std::move(fams));
}

struct DemoReport {
    std::string name;
    double grid_step = 0.0;
    double epsilon = 0.0;
    std::vector<double> xs;

    // pair pipeline (prop31 / cor34)
    bool ran_pair = false;
    bool pointwise_all = false;
    std::vector<int> pointwise_ok;
    double max_jump = 0.0;
    double jump_from_x = 0.0;
    double jump_to_x = 0.0;
    std::vector<double> jump_series;
    double cert_residual = 0.0;
    std::vector<double> cert_residual_series;

    // witness-field pipeline (prop33 / cor34)
    bool ran_witness_field = false;
    std::vector<int> ds_ok;
    std::vector<int> us3_ok;
};

/// Builds one of the named counterexample demonstrations on [-1, 1] and runs
/// the full measurement pipeline.  Pointwise verdicts and certificates are
/// proofs (up to the stated tolerances); the continuation jump is heuristic
/// evidence only and is labeled as such in every emitted report.
inline DemoReport demo_counterexamples(const std::string& name, double grid_step,
                                       std::uint64_t seed = 0, double epsilon = 0.05) {
    require(grid_step > 0.0 && grid_step <= 1.0, Errc::InvalidArgument, "grid step");
    GridSpace g = GridSpace::interval(-1.0, 1.0, grid_step);

    DemoReport report;
    report.name = name;
    report.grid_step = grid_step;
    report.epsilon = epsilon;
    for (std::size_t k = 0; k < g.size(); ++k) report.xs.push_back(g.coordinate(k));

    auto run_pair = [&](const MatrixField& a, const MatrixField& b) {
        report.ran_pair = true;
        PointwiseCheckResult pw = pointwise_majorization_check(a, b, seed);
        report.pointwise_all = pw.majorized;
        report.pointwise_ok.assign(g.size(), 1);
        for (std::size_t k : pw.failures) report.pointwise_ok[k] = 0;
        if (pw.majorized) {
            ContinuationProbe probe = continuation_ds_probe(a, b, seed);
            report.max_jump = probe.max_jump;
            report.jump_from_x = g.coordinate(probe.jump_from);
            report.jump_to_x = g.coordinate(probe.jump_to);
            report.jump_series = probe.jump_series;
            ApproxHullResult hull = approx_hull_membership(a, b, epsilon, seed);
            report.cert_residual = hull.achieved_residual;
            report.cert_residual_series = field_mixture_residual_series(hull.mixture, a, b);
        }
    };

    auto run_witness_field = [&](const DSField& x) {
        report.ran_witness_field = true;
        for (std::size_t k = 0; k < g.size(); ++k) {
            report.ds_ok.push_back(1);  // construction already validated DS invariants
            report.us3_ok.push_back(unistochastic3_check(x.at(k)) ? 1 : 0);
        }
    };

    if (name == "prop31") {
        run_pair(selection_gap_field_a(g), selection_gap_field_b(g));
    } else if (name == "prop33") {
        run_witness_field(rotating_ds_field(g));
    } else if (name == "cor34") {
        run_pair(rotating_pair_field_a(g), rotating_pair_field_b(g));
        run_witness_field(rotating_ds_field(g));
    } else {
        fail(Errc::UnknownDemo, "unknown demo '" + name + "'");
    }
    return report;
}

/// Plot-ready per-point series; columns vary with what the demo ran.
inline std::string demo_csv(const DemoReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << "x";
    if (r.ran_pair) out << ",pointwise_ok,jump,cert_residual";
    if (r.ran_witness_field) out << ",ds_ok,us3_ok";
    out << "\n";
    for (std::size_t k = 0; k < r.xs.size(); ++k) {
        out << r.xs[k];
        if (r.ran_pair) {
            out << "," << (k < r.pointwise_ok.size() ? r.pointwise_ok[k] : 0);
            out << "," << (k < r.jump_series.size() ? r.jump_series[k] : 0.0);
            out << "," << (k < r.cert_residual_series.size() ? r.cert_residual_series[k] : 0.0);
        }
        if (r.ran_witness_field) {
            out << "," << (k < r.ds_ok.size() ? r.ds_ok[k] : 0);
            out << "," << (k < r.us3_ok.size() ? r.us3_ok[k] : 0);
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace majorize
