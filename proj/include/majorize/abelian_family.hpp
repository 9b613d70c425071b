#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "majorize/complex_matrix.hpp"
#include "majorize/errors.hpp"
#include "majorize/hermitian_eig.hpp"
#include "majorize/random.hpp"

namespace majorize {

/// Tuple of pairwise-commuting Hermitian matrices of a common dimension.
/// Hermiticity and all pairwise commutators are validated at construction.
class AbelianFamily {
public:
    explicit AbelianFamily(std::vector<ComplexMatrix> members, const Tolerances& tol = {})
        : members_(std::move(members)) {
        require(!members_.empty(), Errc::InvalidArgument, "family needs at least one member");
        n_ = members_.front().rows();
        for (const auto& a : members_) {
            require(a.square() && a.rows() == n_, Errc::DimensionMismatch,
                    "family members must share one square dimension");
        }
        scale_ = 0.0;
        for (const auto& a : members_) scale_ = std::max(scale_, a.max_abs());
        const double herm_tol = Tolerances::scaled(tol.hermitian_rel, scale_);
        for (std::size_t j = 0; j < members_.size(); ++j) {
            if (members_[j].hermitian_deviation() > herm_tol)
                fail(Errc::NotHermitian, "member " + std::to_string(j));
        }
        const double comm_tol = Tolerances::scaled(tol.commutator_rel, scale_ * scale_);
        for (std::size_t j = 0; j < members_.size(); ++j) {
            for (std::size_t k = j + 1; k < members_.size(); ++k) {
                ComplexMatrix c = members_[j] * members_[k] - members_[k] * members_[j];
                if (c.max_abs() > comm_tol)
                    fail(Errc::NotCommuting,
                         "members " + std::to_string(j) + " and " + std::to_string(k));
            }
        }
    }

    std::size_t dim() const { return n_; }                 // n
    std::size_t size() const { return members_.size(); }   // m
    const ComplexMatrix& member(std::size_t j) const { return members_[j]; }
    const std::vector<ComplexMatrix>& members() const { return members_; }
    double scale() const { return scale_; }

private:
    std::vector<ComplexMatrix> members_;
    std::size_t n_ = 0;
    double scale_ = 0.0;
};

/// Joint eigenvalue data: row i of `lambda` is the joint eigenvalue of the
/// i-th common eigenvector, column j belongs to family member j, and
/// `diagonalizer` U satisfies U A_j U* = diag(column j) for every j.
class EigenColumns {
public:
    EigenColumns(std::size_t n, std::size_t m, std::vector<double> lambda, Unitary diagonalizer)
        : n_(n), m_(m), lambda_(std::move(lambda)), diagonalizer_(std::move(diagonalizer)) {
        require(lambda_.size() == n_ * m_, Errc::DimensionMismatch, "lambda shape");
        require(diagonalizer_.dim() == n_, Errc::DimensionMismatch, "diagonalizer shape");
    }

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    double lambda(std::size_t i, std::size_t j) const { return lambda_[i * m_ + j]; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(lambda_).subspan(i * m_, m_);
    }
    std::vector<double> column(std::size_t j) const {
        std::vector<double> c(n_);
        for (std::size_t i = 0; i < n_; ++i) c[i] = lambda(i, j);
        return c;
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : lambda_) m = std::max(m, std::abs(v));
        return m;
    }
    const Unitary& diagonalizer() const { return diagonalizer_; }

    /// Reorders rows: new row i = old row perm[i].  The diagonalizer rows are
    /// permuted identically, preserving U A_j U* = diag(column j).
    EigenColumns permuted(const std::vector<std::size_t>& perm) const {
        std::vector<double> lam(n_ * m_);
        ComplexMatrix u(n_, n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < m_; ++j) lam[i * m_ + j] = lambda(perm[i], j);
            for (std::size_t k = 0; k < n_; ++k) u(i, k) = diagonalizer_.matrix()(perm[i], k);
        }
        return EigenColumns(n_, m_, std::move(lam), Unitary(std::move(u), 1e-8));
    }

private:
    std::size_t n_;
    std::size_t m_;
    std::vector<double> lambda_;  // n x m row-major
    Unitary diagonalizer_;
};

namespace detail {

inline bool block_is_diagonal(const std::vector<ComplexMatrix>& mats, double tol) {
    for (const auto& m : mats)
        if (m.off_diagonal_max() > tol) return false;
    return true;
}

/// Recursive refinement: diagonalize a seeded random real combination of the
/// compressed members, then recurse into eigenvalue clusters the combination
/// failed to separate.  `basis` columns [lo, lo+size) span the current block.
inline void refine_block(const std::vector<ComplexMatrix>& members, ComplexMatrix& basis,
                         std::size_t lo, std::size_t size, int depth, Rng& rng, double scale,
                         double diag_tol) {
    const std::size_t n = basis.rows();
    const std::size_t m = members.size();
    if (size <= 1) return;
    if (depth > static_cast<int>(n) + 4)
        fail(Errc::DegenerateSplitFailure, "refinement recursion exceeded depth budget");

    // Compress each member onto the block: M_j = W* A_j W.
    std::vector<ComplexMatrix> compressed;
    compressed.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        ComplexMatrix aw(n, size);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < size; ++c) {
                Complex s(0.0, 0.0);
                for (std::size_t k = 0; k < n; ++k) s += members[j](r, k) * basis(k, lo + c);
                aw(r, c) = s;
            }
        ComplexMatrix mj(size, size);
        for (std::size_t r = 0; r < size; ++r)
            for (std::size_t c = 0; c < size; ++c) {
                Complex s(0.0, 0.0);
                for (std::size_t k = 0; k < n; ++k) s += std::conj(basis(k, lo + r)) * aw(k, c);
                mj(r, c) = s;
            }
        compressed.push_back(std::move(mj));
    }
    if (block_is_diagonal(compressed, diag_tol)) return;

    for (int attempt = 0;; ++attempt) {
        if (attempt >= 6)
            fail(Errc::DegenerateSplitFailure, "random combinations failed to split a block");

        std::vector<double> coeff(m);
        for (auto& c : coeff) c = rng.uniform(-1.0, 1.0);
        ComplexMatrix h(size, size);
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t r = 0; r < size; ++r)
                for (std::size_t c = 0; c < size; ++c) h(r, c) += coeff[j] * compressed[j](r, c);
        }
        std::optional<EigenDecomposition> ed;
        try {
            ed = hermitian_eigendecompose(h);
        } catch (const Error&) {
            continue;
        }

        // Cluster eigenvalues; a conservative threshold merges near-degenerate
        // values and lets the recursion separate them on cleaner data.
        const double cluster_tol = 1e-6 * (1.0 + scale);
        std::vector<std::pair<std::size_t, std::size_t>> clusters;
        std::size_t start = 0;
        for (std::size_t i = 1; i <= size; ++i) {
            if (i == size ||
                std::abs(ed->eigenvalues[i] - ed->eigenvalues[i - 1]) > cluster_tol) {
                clusters.emplace_back(start, i - start);
                start = i;
            }
        }
        if (clusters.size() == 1 && size > 1) continue;  // unlucky combination

        // basis block <- basis block * V
        ComplexMatrix updated(n, size);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < size; ++c) {
                Complex s(0.0, 0.0);
                for (std::size_t k = 0; k < size; ++k)
                    s += basis(r, lo + k) * ed->eigenvectors.matrix()(k, c);
                updated(r, c) = s;
            }
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < size; ++c) basis(r, lo + c) = updated(r, c);

        for (const auto& [clo, csize] : clusters)
            if (csize > 1) refine_block(members, basis, lo + clo, csize, depth + 1, rng, scale,
                                        diag_tol);
        return;
    }
}

}  // namespace detail

/// Simultaneous diagonalization of a commuting Hermitian family.  Rows of the
/// result are sorted lexicographically descending over joint eigenvalues,
/// which fixes a canonical, reproducible order.
inline EigenColumns joint_diagonalize(const AbelianFamily& family, std::uint64_t seed = 0,
                                      const Tolerances& tol = {}) {
    const std::size_t n = family.dim();
    const std::size_t m = family.size();
    const double scale = family.scale();
    const double diag_tol = Tolerances::scaled(tol.diagonal_rel, scale);

    ComplexMatrix basis = ComplexMatrix::identity(n);
    Rng rng = Rng(seed).fork(0x6a6f696e74ull);
    detail::refine_block(family.members(), basis, 0, n, 0, rng, scale, diag_tol);

    // U = basis* so that U A_j U* = diag.
    ComplexMatrix u = basis.adjoint();
    std::vector<double> lambda(n * m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        ComplexMatrix d = u * family.member(j) * basis;
        if (d.off_diagonal_max() > diag_tol)
            fail(Errc::DegenerateSplitFailure, "off-diagonal residual above tolerance");
        for (std::size_t i = 0; i < n; ++i) lambda[i * m + j] = d(i, i).real();
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        for (std::size_t j = 0; j < m; ++j) {
            const double x = lambda[a * m + j], y = lambda[b * m + j];
            if (x != y) return x > y;
        }
        return a < b;
    });

    std::vector<double> sorted(n * m);
    ComplexMatrix usorted(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) sorted[i * m + j] = lambda[order[i] * m + j];
        for (std::size_t k = 0; k < n; ++k) usorted(i, k) = u(order[i], k);
    }
    return EigenColumns(n, m, std::move(sorted), Unitary(std::move(usorted), 1e-8));
}

/// f(A_1,...,A_m) through the joint functional calculus.
inline ComplexMatrix apply_function_to_family(
    const EigenColumns& ec, const std::function<double(std::span<const double>)>& f) {
    const std::size_t n = ec.n();
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = f(ec.row(i));
    const ComplexMatrix& u = ec.diagonalizer().matrix();
    return u.adjoint() * ComplexMatrix::diagonal(values) * u;
}

inline ComplexMatrix apply_function_to_family(
    const AbelianFamily& family, const std::function<double(std::span<const double>)>& f,
    std::uint64_t seed = 0) {
    return apply_function_to_family(joint_diagonalize(family, seed), f);
}

/// Normalized trace of f(A_1,...,A_m): the mean of f over joint eigenvalues.
inline double trace_of_function(const EigenColumns& ec,
                                const std::function<double(std::span<const double>)>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < ec.n(); ++i) s += f(ec.row(i));
    return s / static_cast<double>(ec.n());
}

inline double trace_of_function(const AbelianFamily& family,
                                const std::function<double(std::span<const double>)>& f,
                                std::uint64_t seed = 0) {
    return trace_of_function(joint_diagonalize(family, seed), f);
}

}  // namespace majorize
