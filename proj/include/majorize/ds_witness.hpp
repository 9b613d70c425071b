#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "majorize/abelian_family.hpp"
#include "majorize/doubly_stochastic.hpp"
#include "majorize/errors.hpp"
#include "majorize/hermitian_eig.hpp"
#include "majorize/simplex.hpp"

namespace majorize {

struct WitnessOptions {
    double feas_rel = 1e-8;      // feas_tol = feas_rel * (1 + max|lambda_B|)
    int refine_iterations = 200;
    int max_pivots = 50000;
};

namespace detail {

inline double witness_fit_error(const std::vector<double>& x, const EigenColumns& a,
                                const EigenColumns& b) {
    const std::size_t n = a.n(), m = a.m();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += x[i * n + k] * b.lambda(k, j);
            worst = std::max(worst, std::abs(s - a.lambda(i, j)));
        }
    }
    return worst;
}

inline bool witness_feasible(const std::vector<double>& x, const EigenColumns& a,
                             const EigenColumns& b, double feas_tol) {
    const std::size_t n = a.n();
    for (double e : x)
        if (e < -1e-10) return false;
    for (std::size_t i = 0; i < n; ++i) {
        double rs = 0.0, cs = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            rs += x[i * n + j];
            cs += x[j * n + i];
        }
        if (std::abs(rs - 1.0) > 1e-9 || std::abs(cs - 1.0) > 1e-9) return false;
    }
    return witness_fit_error(x, a, b) <= feas_tol;
}

/// Projection onto the affine set {row sums = 1, column sums = 1,
/// X lambda_B = lambda_A exactly} via a precomputed pseudoinverse, plus the
/// nonnegative orthant, combined by Dykstra's alternating scheme.  Pulling the
/// fit constraints tight (rather than the +-feas_tol box used by the LP) makes
/// feasible references reproduce exactly.
class WitnessRefiner {
public:
    WitnessRefiner(const EigenColumns& a, const EigenColumns& b)
        : n_(a.n()), m_(a.m()) {
        const std::size_t nv = n_ * n_;
        const std::size_t nc = 2 * n_ + n_ * m_;
        rows_.assign(nc, std::vector<double>(nv, 0.0));
        rhs_.assign(nc, 0.0);
        std::size_t r = 0;
        for (std::size_t i = 0; i < n_; ++i, ++r) {  // row sums
            for (std::size_t j = 0; j < n_; ++j) rows_[r][i * n_ + j] = 1.0;
            rhs_[r] = 1.0;
        }
        for (std::size_t j = 0; j < n_; ++j, ++r) {  // column sums
            for (std::size_t i = 0; i < n_; ++i) rows_[r][i * n_ + j] = 1.0;
            rhs_[r] = 1.0;
        }
        for (std::size_t i = 0; i < n_; ++i) {  // exact fit
            for (std::size_t j = 0; j < m_; ++j, ++r) {
                for (std::size_t k = 0; k < n_; ++k) rows_[r][i * n_ + k] = b.lambda(k, j);
                rhs_[r] = a.lambda(i, j);
            }
        }

        ComplexMatrix gram(nc, nc);
        for (std::size_t p = 0; p < nc; ++p)
            for (std::size_t q = 0; q < nc; ++q) {
                double s = 0.0;
                for (std::size_t k = 0; k < nv; ++k) s += rows_[p][k] * rows_[q][k];
                gram(p, q) = s;
            }
        pinv_ = symmetric_pseudoinverse(gram);
    }

    std::vector<double> project_affine(const std::vector<double>& y) const {
        const std::size_t nc = rows_.size();
        std::vector<double> resid(nc, 0.0);
        for (std::size_t p = 0; p < nc; ++p) {
            double s = -rhs_[p];
            for (std::size_t k = 0; k < y.size(); ++k) s += rows_[p][k] * y[k];
            resid[p] = s;
        }
        std::vector<double> mult(nc, 0.0);
        for (std::size_t p = 0; p < nc; ++p) {
            double s = 0.0;
            for (std::size_t q = 0; q < nc; ++q) s += pinv_(p, q).real() * resid[q];
            mult[p] = s;
        }
        std::vector<double> out = y;
        for (std::size_t p = 0; p < nc; ++p)
            for (std::size_t k = 0; k < out.size(); ++k) out[k] -= rows_[p][k] * mult[p];
        return out;
    }

    std::vector<double> refine(const std::vector<double>& reference, int iterations) const {
        std::vector<double> x = reference;
        std::vector<double> corr(x.size(), 0.0);
        std::vector<double> best = project_affine(x);
        for (int it = 0; it < iterations; ++it) {
            std::vector<double> y = project_affine(x);
            best = y;
            bool clamped = false;
            for (std::size_t k = 0; k < x.size(); ++k) {
                const double pre = y[k] + corr[k];
                const double post = std::max(0.0, pre);
                corr[k] = pre - post;
                if (post != pre) clamped = true;
                x[k] = post;
            }
            if (!clamped) break;
        }
        return best;
    }

private:
    std::size_t n_, m_;
    std::vector<std::vector<double>> rows_;
    std::vector<double> rhs_;
    ComplexMatrix pinv_;
};

}  // namespace detail

/// Searches DS_n for X with X lambda_B = lambda_A within feas_tol.  The
/// decision is a phase-1 simplex over the Birkhoff polytope with the nm fit
/// equalities relaxed to a +-feas_tol box; when a reference is supplied the
/// answer additionally minimizes squared Frobenius distance to it (feasible
/// references are returned unchanged).
inline std::optional<DoublyStochastic> find_ds_witness(
    const EigenColumns& lambda_a, const EigenColumns& lambda_b,
    const std::optional<DoublyStochastic>& reference = std::nullopt,
    const WitnessOptions& opt = {}) {
    require(lambda_a.n() == lambda_b.n() && lambda_a.m() == lambda_b.m(),
            Errc::DimensionMismatch, "eigen column shapes differ");
    const std::size_t n = lambda_a.n(), m = lambda_a.m();
    const double feas_tol = opt.feas_rel * (1.0 + lambda_b.max_abs());

    if (reference) {
        require(reference->dim() == n, Errc::DimensionMismatch, "reference dimension");
        std::vector<double> ref(reference->entries().begin(), reference->entries().end());
        if (detail::witness_feasible(ref, lambda_a, lambda_b, feas_tol)) return *reference;
    }

    LpProblem lp;
    lp.num_vars = n * n;
    for (std::size_t i = 0; i < n; ++i) {  // row sums = 1
        std::vector<double> row(lp.num_vars, 0.0);
        for (std::size_t j = 0; j < n; ++j) row[i * n + j] = 1.0;
        lp.eq.push_back(std::move(row));
        lp.eq_rhs.push_back(1.0);
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {  // first n-1 column sums (last is implied)
        std::vector<double> row(lp.num_vars, 0.0);
        for (std::size_t i = 0; i < n; ++i) row[i * n + j] = 1.0;
        lp.eq.push_back(std::move(row));
        lp.eq_rhs.push_back(1.0);
    }
    for (std::size_t i = 0; i < n; ++i) {  // |(X lambda_B - lambda_A)_{ij}| <= feas_tol
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<double> row(lp.num_vars, 0.0);
            for (std::size_t k = 0; k < n; ++k) row[i * n + k] = lambda_b.lambda(k, j);
            std::vector<double> neg(row.size());
            for (std::size_t k = 0; k < row.size(); ++k) neg[k] = -row[k];
            lp.le.push_back(std::move(row));
            lp.le_rhs.push_back(lambda_a.lambda(i, j) + feas_tol);
            lp.le.push_back(std::move(neg));
            lp.le_rhs.push_back(-(lambda_a.lambda(i, j) - feas_tol));
        }
    }

    LpSolution sol = solve_lp(lp, 1e-11, opt.max_pivots);
    if (sol.status == LpStatus::infeasible) return std::nullopt;
    if (sol.status != LpStatus::optimal) fail(Errc::SolverFailure, "simplex pivot budget");

    for (auto& e : sol.x) e = std::max(0.0, e);

    // Tighten the LP vertex (or pull toward the reference) on the exact-fit
    // face; the relaxed box keeps the decision robust, the refinement keeps
    // certificates near machine precision.
    std::vector<double> start =
        reference ? std::vector<double>(reference->entries().begin(), reference->entries().end())
                  : sol.x;
    detail::WitnessRefiner refiner(lambda_a, lambda_b);
    std::vector<double> refined = refiner.refine(start, opt.refine_iterations);
    if (detail::witness_feasible(refined, lambda_a, lambda_b, feas_tol))
        return DoublyStochastic(n, std::move(refined));
    if (reference) {  // second chance from the LP vertex
        refined = refiner.refine(sol.x, opt.refine_iterations);
        if (detail::witness_feasible(refined, lambda_a, lambda_b, feas_tol))
            return DoublyStochastic(n, std::move(refined));
    }
    return DoublyStochastic(n, std::move(sol.x));
}

/// Joint majorization decision for commuting families: diagonalize both and
/// look for the doubly stochastic witness on the eigenvalue columns.  One LP
/// simultaneously decides the doubly stochastic, tracial and convex-hull
/// formulations, which coincide in a matrix algebra.
inline std::pair<bool, std::optional<DoublyStochastic>> decide_joint_majorization(
    const AbelianFamily& a, const AbelianFamily& b, std::uint64_t seed = 0,
    const WitnessOptions& opt = {}) {
    require(a.dim() == b.dim() && a.size() == b.size(), Errc::DimensionMismatch,
            "families must share n and m");
    EigenColumns ea = joint_diagonalize(a, seed);
    EigenColumns eb = joint_diagonalize(b, seed);
    auto witness = find_ds_witness(ea, eb, std::nullopt, opt);
    return {witness.has_value(), std::move(witness)};
}

}  // namespace majorize
