#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "majorize/ds_witness.hpp"
#include "majorize/errors.hpp"
#include "majorize/fields.hpp"
#include "majorize/hyperplane_max.hpp"

namespace majorize {

/// Eigencolumns per point, reordered along the grid so each row follows one
/// eigenvector branch: row s at point k is matched to row s at point k-1 by
/// largest eigenvector overlap.  This is the presentation in which a
/// continuous family has continuous eigenvalue rows; canonical per-point
/// sorting would hide exactly the selection obstructions the continuation
/// probe exists to expose.
inline std::vector<EigenColumns> track_field_eigencolumns(const MatrixField& f,
                                                          std::uint64_t seed = 0) {
    std::vector<EigenColumns> out;
    out.reserve(f.points());
    for (std::size_t k = 0; k < f.points(); ++k) {
        EigenColumns ec = joint_diagonalize(f.at(k), seed);
        if (k == 0) {
            out.push_back(std::move(ec));
            continue;
        }
        const std::size_t n = ec.n();
        const ComplexMatrix overlap = ec.diagonalizer().matrix() *
                                      out.back().diagonalizer().matrix().adjoint();
        std::vector<std::size_t> perm(n, n);
        std::vector<bool> row_used(n, false), slot_used(n, false);
        for (std::size_t pick = 0; pick < n; ++pick) {
            double best = -1.0;
            std::size_t bi = 0, bs = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (row_used[i]) continue;
                for (std::size_t s = 0; s < n; ++s) {
                    if (slot_used[s]) continue;
                    const double w = std::norm(overlap(i, s));
                    if (w > best) {
                        best = w;
                        bi = i;
                        bs = s;
                    }
                }
            }
            perm[bs] = bi;
            row_used[bi] = true;
            slot_used[bs] = true;
        }
        out.push_back(ec.permuted(perm));
    }
    return out;
}

struct PointwiseCheckResult {
    bool majorized = false;
    std::optional<DSField> witnesses;     // present when every point passes
    std::vector<std::size_t> failures;    // indices of failing points
};

/// Runs the joint majorization decision at every grid point.  Witness LPs are
/// chained: each point's solve is seeded with the previous point's witness as
/// the quadratic-refinement reference.
inline PointwiseCheckResult pointwise_majorization_check(const MatrixField& a,
                                                         const MatrixField& b,
                                                         std::uint64_t seed = 0,
                                                         const WitnessOptions& opt = {}) {
    require(a.space().same_as(b.space()), Errc::SpaceMismatch, "grids differ");
    require(a.n() == b.n() && a.m() == b.m(), Errc::DimensionMismatch, "field shapes differ");

    PointwiseCheckResult result;
    std::vector<DoublyStochastic> witnesses;
    std::optional<DoublyStochastic> previous;
    for (std::size_t k = 0; k < a.points(); ++k) {
        EigenColumns ea = joint_diagonalize(a.at(k), seed);
        EigenColumns eb = joint_diagonalize(b.at(k), seed);
        auto w = find_ds_witness(ea, eb, previous, opt);
        if (w) {
            previous = *w;
            witnesses.push_back(std::move(*w));
        } else {
            result.failures.push_back(k);
        }
    }
    result.majorized = result.failures.empty();
    if (result.majorized) result.witnesses = DSField(a.space(), std::move(witnesses));
    return result;
}

/// Applies the tracial falsifier at every point; the first refuted point is a
/// sound refutation of tracial majorization of the fields (point evaluations
/// are the extreme tracial states).
inline std::optional<std::pair<std::size_t, HyperplaneMaxFunction>> tracial_field_refuter(
    const MatrixField& a, const MatrixField& b, int trials, std::uint64_t seed,
    const RefuterOptions& opt = {}) {
    require(a.space().same_as(b.space()), Errc::SpaceMismatch, "grids differ");
    require(a.n() == b.n() && a.m() == b.m(), Errc::DimensionMismatch, "field shapes differ");
    for (std::size_t k = 0; k < a.points(); ++k) {
        auto g = tracial_refuter(a.at(k), b.at(k), trials, seed, opt);
        if (g) return std::make_pair(k, std::move(*g));
    }
    return std::nullopt;
}

struct ContinuationProbe {
    DSField ds_field;
    double max_jump = 0.0;
    std::size_t jump_from = 0;  // grid indices of the worst consecutive pair
    std::size_t jump_to = 0;
    std::vector<double> jump_series;  // jump_series[k] = |X_k - X_{k-1}|_F, [0] = 0
};

/// Heuristic probe for continuous witness selection on a 1-d grid: solve the
/// witness LP left to right in the eigenvector-tracked presentation, each
/// point pulling toward the previous witness (or toward a supplied reference
/// field), and report the largest consecutive Frobenius jump.  A jump far
/// above the field's own modulus of continuity flags a likely failure of
/// continuous selection; this is evidence, not a decision procedure.
inline ContinuationProbe continuation_ds_probe(const MatrixField& a, const MatrixField& b,
                                               std::uint64_t seed = 0,
                                               const DSField* reference_field = nullptr,
                                               const WitnessOptions& opt = {}) {
    require(a.space().same_as(b.space()), Errc::SpaceMismatch, "grids differ");
    require(a.n() == b.n() && a.m() == b.m(), Errc::DimensionMismatch, "field shapes differ");
    require(a.space().dim() == 1, Errc::InvalidArgument, "continuation probe needs a 1-d grid");
    if (reference_field)
        require(reference_field->points() == a.points() && reference_field->dim() == a.n(),
                Errc::DimensionMismatch, "reference field shape");

    std::vector<EigenColumns> ea = track_field_eigencolumns(a, seed);
    std::vector<EigenColumns> eb = track_field_eigencolumns(b, seed ^ 0x5b5ull);

    std::vector<DoublyStochastic> witnesses;
    std::optional<DoublyStochastic> previous;
    for (std::size_t k = 0; k < a.points(); ++k) {
        std::optional<DoublyStochastic> reference =
            reference_field ? std::optional<DoublyStochastic>(reference_field->at(k)) : previous;
        auto w = find_ds_witness(ea[k], eb[k], reference, opt);
        if (!w)
            fail(Errc::NotPointwiseMajorized,
                 "witness LP infeasible at grid index " + std::to_string(k));
        previous = *w;
        witnesses.push_back(std::move(*w));
    }

    ContinuationProbe probe{DSField(a.space(), std::move(witnesses)), 0.0, 0, 0, {}};
    probe.jump_series.assign(a.points(), 0.0);
    for (std::size_t k = 1; k < a.points(); ++k) {
        const double d = probe.ds_field.at(k).frobenius_distance(probe.ds_field.at(k - 1));
        probe.jump_series[k] = d;
        if (d > probe.max_jump) {
            probe.max_jump = d;
            probe.jump_from = k - 1;
            probe.jump_to = k;
        }
    }
    return probe;
}

}  // namespace majorize
