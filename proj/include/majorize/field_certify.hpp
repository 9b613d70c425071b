#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "majorize/ds_witness.hpp"
#include "majorize/errors.hpp"
#include "majorize/field_checks.hpp"
#include "majorize/fields.hpp"
#include "majorize/mixtures.hpp"
#include "majorize/probability.hpp"

namespace majorize {

/// Exact two-term certificate for n = 2 fields from a supplied witness field:
/// X(x) = [[f, 1-f], [1-f, f]] is realized by the rotation pair with angle
/// arccos(sqrt(f)), conjugated by the per-point diagonalizers.
inline MixtureField exact_mixture_field_2x2(const MatrixField& a, const MatrixField& b,
                                            const DSField& x, std::uint64_t seed = 0,
                                            const WitnessOptions& opt = {}) {
    require(a.n() == 2 && b.n() == 2, Errc::WrongDimension, "construction needs n = 2");
    require(a.space().same_as(b.space()), Errc::SpaceMismatch, "grids differ");
    require(a.m() == b.m(), Errc::DimensionMismatch, "member counts differ");
    require(x.points() == a.points() && x.dim() == 2, Errc::DimensionMismatch,
            "witness field shape");

    std::vector<EigenColumns> ea = track_field_eigencolumns(a, seed);
    std::vector<EigenColumns> eb = track_field_eigencolumns(b, seed ^ 0x5b5ull);

    std::vector<std::vector<Unitary>> unitary_fields(2);
    std::vector<std::vector<std::size_t>> cells;
    for (std::size_t k = 0; k < a.points(); ++k) {
        const double feas_tol = opt.feas_rel * (1.0 + eb[k].max_abs());
        std::vector<double> xe(x.at(k).entries().begin(), x.at(k).entries().end());
        if (detail::witness_fit_error(xe, ea[k], eb[k]) > feas_tol)
            fail(Errc::NotAWitness,
                 "supplied field does not relate the eigenvalues at grid index " +
                     std::to_string(k));

        const double f = std::clamp(x.at(k)(0, 0), 0.0, 1.0);
        const double theta = std::acos(std::sqrt(f));
        const ComplexMatrix& u = ea[k].diagonalizer().matrix();
        const ComplexMatrix vt = eb[k].diagonalizer().matrix().adjoint();
        unitary_fields[0].emplace_back(vt * detail::planar_rotation(2, 0, 1, theta, false) * u,
                                       1e-8);
        unitary_fields[1].emplace_back(vt * detail::planar_rotation(2, 0, 1, theta, true) * u,
                                       1e-8);
        cells.push_back({k});
    }
    return MixtureField(ProbabilityVector({0.5, 0.5}), std::move(unitary_fields),
                        std::move(cells), a.points());
}

struct ApproxHullResult {
    MixtureField mixture;
    double achieved_residual = 0.0;
};

namespace detail {

/// Contiguous segments on which every eigenvalue entry of both fields
/// oscillates by less than epsilon.
inline std::vector<std::pair<std::size_t, std::size_t>> oscillation_cells(
    const std::vector<EigenColumns>& ea, const std::vector<EigenColumns>& eb, double epsilon) {
    const std::size_t points = ea.size();
    const std::size_t n = ea.front().n(), m = ea.front().m();
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    std::size_t lo = 0;
    std::vector<double> amin(n * m), amax(n * m), bmin(n * m), bmax(n * m);
    auto reset = [&](std::size_t k) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                amin[i * m + j] = amax[i * m + j] = ea[k].lambda(i, j);
                bmin[i * m + j] = bmax[i * m + j] = eb[k].lambda(i, j);
            }
    };
    reset(0);
    for (std::size_t k = 1; k < points; ++k) {
        bool fits = true;
        for (std::size_t i = 0; i < n && fits; ++i)
            for (std::size_t j = 0; j < m && fits; ++j) {
                const double av = ea[k].lambda(i, j), bv = eb[k].lambda(i, j);
                if (std::max(amax[i * m + j], av) - std::min(amin[i * m + j], av) >= epsilon)
                    fits = false;
                if (std::max(bmax[i * m + j], bv) - std::min(bmin[i * m + j], bv) >= epsilon)
                    fits = false;
            }
        if (fits) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < m; ++j) {
                    amin[i * m + j] = std::min(amin[i * m + j], ea[k].lambda(i, j));
                    amax[i * m + j] = std::max(amax[i * m + j], ea[k].lambda(i, j));
                    bmin[i * m + j] = std::min(bmin[i * m + j], eb[k].lambda(i, j));
                    bmax[i * m + j] = std::max(bmax[i * m + j], eb[k].lambda(i, j));
                }
        } else {
            cells.emplace_back(lo, k);
            lo = k;
            reset(k);
        }
    }
    cells.emplace_back(lo, points);
    return cells;
}

/// Largest-remainder apportionment of weights into d integer counts.
inline std::vector<std::size_t> apportion(std::span<const double> weights, std::size_t d) {
    std::vector<std::size_t> counts(weights.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double exact = weights[i] * static_cast<double>(d);
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += counts[i];
        remainders.emplace_back(exact - std::floor(exact), i);
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first > y.first;
        return x.second < y.second;
    });
    for (std::size_t r = 0; assigned < d && r < remainders.size(); ++r, ++assigned)
        ++counts[remainders[r].second];
    while (assigned > d) {  // only possible through accumulated roundoff
        for (auto& c : counts)
            if (assigned > d && c > 0) {
                --c;
                --assigned;
            }
    }
    return counts;
}

}  // namespace detail

/// Piecewise-constant approximate certificate for pointwise-majorized fields:
/// partition the grid into cells of eigenvalue oscillation below epsilon,
/// certify each cell at a representative point through the Birkhoff route,
/// unify the per-cell weight vectors into a single global probability vector,
/// and conjugate by the per-point diagonalizers.  The measured residual is
/// guaranteed at most 4 * epsilon (3 from the cell estimate, 1 from weight
/// rounding).
inline ApproxHullResult approx_hull_membership(const MatrixField& a, const MatrixField& b,
                                               double epsilon, std::uint64_t seed = 0,
                                               const WitnessOptions& opt = {}) {
    require(a.space().same_as(b.space()), Errc::SpaceMismatch, "grids differ");
    require(a.n() == b.n() && a.m() == b.m(), Errc::DimensionMismatch, "field shapes differ");
    if (!(epsilon > 0.0)) fail(Errc::EpsilonTooSmall, "epsilon must be positive");

    std::vector<EigenColumns> ea = diagonalize_field(a, seed);
    std::vector<EigenColumns> eb = diagonalize_field(b, seed ^ 0x5b5ull);

    const auto cells = detail::oscillation_cells(ea, eb, epsilon);
    const std::size_t ncells = cells.size();

    // Per-cell witnesses and their Birkhoff decompositions.
    std::vector<std::vector<BirkhoffTerm>> cell_terms(ncells);
    std::size_t max_terms = 0;
    for (std::size_t c = 0; c < ncells; ++c) {
        const std::size_t rep = (cells[c].first + cells[c].second - 1) / 2;
        auto w = find_ds_witness(ea[rep], eb[rep], std::nullopt, opt);
        if (!w)
            fail(Errc::NotPointwiseMajorized,
                 "witness LP infeasible at grid index " + std::to_string(rep));
        cell_terms[c] = birkhoff_decompose(*w);
        max_terms = std::max(max_terms, cell_terms[c].size());
    }

    // Unify weights: exact product merge for very few cells, common-denominator
    // rounding otherwise (the exact merge is exponential in the cell count).
    std::vector<double> global_weights;
    std::vector<std::vector<std::size_t>> slot_of_cell(ncells);  // [cell][slot] -> term index
    if (ncells <= 3) {
        std::vector<ProbabilityVector> padded;
        for (std::size_t c = 0; c < ncells; ++c) {
            std::vector<double> w(max_terms, 0.0);
            for (std::size_t t = 0; t < cell_terms[c].size(); ++t)
                w[t] = cell_terms[c][t].weight;
            padded.emplace_back(std::move(w));
        }
        MergeResult merged = merge_probability_vectors(padded);
        for (std::size_t q = 0; q < merged.merged.size(); ++q) {
            if (merged.merged[q] == 0.0) continue;
            global_weights.push_back(merged.merged[q]);
            std::size_t rest = q;
            std::vector<std::size_t> digit(ncells);
            for (std::size_t c = ncells; c-- > 0;) {
                digit[c] = rest % max_terms;
                rest /= max_terms;
            }
            for (std::size_t c = 0; c < ncells; ++c)
                slot_of_cell[c].push_back(std::min(digit[c], cell_terms[c].size() - 1));
        }
    } else {
        double b_bound = 0.0;
        for (const auto& ec : eb) b_bound = std::max(b_bound, ec.max_abs());
        const double eps_w = epsilon / std::max(1.0, b_bound);
        const double denom = std::ceil(static_cast<double>(max_terms) / eps_w);
        if (denom > 1e6) fail(Errc::EpsilonTooSmall, "rounding denominator too large");
        const std::size_t d = static_cast<std::size_t>(denom);
        global_weights.assign(d, 1.0 / static_cast<double>(d));
        for (std::size_t c = 0; c < ncells; ++c) {
            std::vector<double> w;
            for (const auto& t : cell_terms[c]) w.push_back(t.weight);
            std::vector<std::size_t> counts = detail::apportion(w, d);
            for (std::size_t t = 0; t < counts.size(); ++t)
                for (std::size_t r = 0; r < counts[t]; ++r) slot_of_cell[c].push_back(t);
        }
    }
    const std::size_t terms = global_weights.size();

    // Assemble per-term unitary fields: cell-constant middle permutations
    // conjugated by the per-point diagonalizers.
    std::vector<std::vector<Unitary>> unitary_fields(terms);
    for (auto& uf : unitary_fields) uf.reserve(a.points());
    for (std::size_t c = 0; c < ncells; ++c) {
        std::vector<ComplexMatrix> middles;
        middles.reserve(cell_terms[c].size());
        for (const auto& t : cell_terms[c])
            middles.push_back(t.permutation.to_matrix_transposed());
        for (std::size_t k = cells[c].first; k < cells[c].second; ++k) {
            const ComplexMatrix& u = ea[k].diagonalizer().matrix();
            const ComplexMatrix vt = eb[k].diagonalizer().matrix().adjoint();
            for (std::size_t q = 0; q < terms; ++q)
                unitary_fields[q].emplace_back(vt * middles[slot_of_cell[c][q]] * u, 1e-8);
        }
    }

    // Declared cells: maximal runs on which every unitary field is constant
    // bit for bit (oscillation cells merge wherever the assembled unitaries
    // agree, and split where the diagonalizers move).
    std::vector<std::vector<std::size_t>> declared;
    declared.push_back({0});
    for (std::size_t k = 1; k < a.points(); ++k) {
        bool same = true;
        for (std::size_t q = 0; q < terms && same; ++q) {
            const ComplexMatrix& prev = unitary_fields[q][k - 1].matrix();
            const ComplexMatrix& cur = unitary_fields[q][k].matrix();
            if ((prev - cur).max_abs() != 0.0) same = false;
        }
        if (same)
            declared.back().push_back(k);
        else
            declared.push_back({k});
    }

    MixtureField mixture(ProbabilityVector(std::move(global_weights)),
                         std::move(unitary_fields), std::move(declared), a.points());
    const double residual = field_mixture_residual(mixture, a, b);
    return ApproxHullResult{std::move(mixture), residual};
}

}  // namespace majorize
