#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "majorize/complex_matrix.hpp"
#include "majorize/errors.hpp"

namespace majorize {

/// Square matrix with nonnegative entries and unit row/column sums, within
/// the usual floating slack (entries >= -1e-10, sums within 1e-9 of 1).
class DoublyStochastic {
public:
    DoublyStochastic(std::size_t n, std::vector<double> entries)
        : n_(n), entries_(std::move(entries)) {
        require(entries_.size() == n_ * n_, Errc::DimensionMismatch, "entry count");
        for (double e : entries_)
            if (e < -1e-10)
                fail(Errc::NotDoublyStochastic, "negative entry " + std::to_string(e));
        for (std::size_t i = 0; i < n_; ++i) {
            double rs = 0.0, cs = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
                rs += (*this)(i, j);
                cs += (*this)(j, i);
            }
            if (std::abs(rs - 1.0) > 1e-9)
                fail(Errc::NotDoublyStochastic, "row " + std::to_string(i) + " sums to " +
                                                    std::to_string(rs));
            if (std::abs(cs - 1.0) > 1e-9)
                fail(Errc::NotDoublyStochastic, "column " + std::to_string(i) + " sums to " +
                                                    std::to_string(cs));
        }
    }

    static DoublyStochastic identity(std::size_t n) {
        std::vector<double> e(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
        return DoublyStochastic(n, std::move(e));
    }

    static DoublyStochastic flat(std::size_t n) {
        return DoublyStochastic(n, std::vector<double>(n * n, 1.0 / static_cast<double>(n)));
    }

    std::size_t dim() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    std::span<const double> entries() const { return entries_; }

    /// X d (the action of the induced diagonal channel on diag(d)).
    std::vector<double> apply(std::span<const double> d) const {
        require(d.size() == n_, Errc::DimensionMismatch, "vector length");
        std::vector<double> out(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) out[i] += (*this)(i, j) * d[j];
        return out;
    }

    double frobenius_distance(const DoublyStochastic& o) const {
        require(o.n_ == n_, Errc::DimensionMismatch, "dimension");
        double s = 0.0;
        for (std::size_t k = 0; k < entries_.size(); ++k) {
            const double d = entries_[k] - o.entries_[k];
            s += d * d;
        }
        return std::sqrt(s);
    }

private:
    std::size_t n_;
    std::vector<double> entries_;  // row-major
};

/// Permutation sigma as a matrix P with P(i, sigma(i)) = 1, so (Pv)_i =
/// v_{sigma(i)}.
class PermutationMatrix {
public:
    explicit PermutationMatrix(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
        std::vector<bool> seen(perm_.size(), false);
        for (std::size_t v : perm_) {
            require(v < perm_.size() && !seen[v], Errc::InvalidArgument,
                    "permutation is not a bijection");
            seen[v] = true;
        }
    }

    static PermutationMatrix identity(std::size_t n) {
        std::vector<std::size_t> p(n);
        std::iota(p.begin(), p.end(), 0);
        return PermutationMatrix(std::move(p));
    }

    std::size_t dim() const { return perm_.size(); }
    std::size_t operator()(std::size_t i) const { return perm_[i]; }
    std::span<const std::size_t> mapping() const { return perm_; }

    PermutationMatrix inverse() const {
        std::vector<std::size_t> inv(perm_.size());
        for (std::size_t i = 0; i < perm_.size(); ++i) inv[perm_[i]] = i;
        return PermutationMatrix(std::move(inv));
    }

    ComplexMatrix to_matrix() const {
        ComplexMatrix p(dim(), dim());
        for (std::size_t i = 0; i < dim(); ++i) p(i, perm_[i]) = 1.0;
        return p;
    }

    ComplexMatrix to_matrix_transposed() const { return inverse().to_matrix(); }

    std::vector<double> apply(std::span<const double> v) const {
        require(v.size() == dim(), Errc::DimensionMismatch, "vector length");
        std::vector<double> out(dim());
        for (std::size_t i = 0; i < dim(); ++i) out[i] = v[perm_[i]];
        return out;
    }

    DoublyStochastic to_doubly_stochastic() const {
        std::vector<double> e(dim() * dim(), 0.0);
        for (std::size_t i = 0; i < dim(); ++i) e[i * dim() + perm_[i]] = 1.0;
        return DoublyStochastic(dim(), std::move(e));
    }

private:
    std::vector<std::size_t> perm_;
};

/// Doubly stochastic matrix averaging exactly two coordinates:
/// t on the diagonal of {i, j}, 1-t on the swap.
struct TTransform {
    std::size_t i;
    std::size_t j;
    double t;

    TTransform(std::size_t i_, std::size_t j_, double t_) : i(i_), j(j_), t(t_) {
        require(i != j, Errc::InvalidArgument, "indices must differ");
        require(t >= 0.0 && t <= 1.0, Errc::InvalidArgument, "t must lie in [0,1]");
    }

    std::vector<double> apply(std::span<const double> v) const {
        require(i < v.size() && j < v.size(), Errc::DimensionMismatch, "index out of range");
        std::vector<double> out(v.begin(), v.end());
        out[i] = t * v[i] + (1.0 - t) * v[j];
        out[j] = (1.0 - t) * v[i] + t * v[j];
        return out;
    }
};

/// 3x3 chain-links test: X is unistochastic iff for a row pair (r, s) the
/// links sqrt(X_rc X_sc) satisfy the triangle inequality.  The condition is
/// row-pair independent for doubly stochastic X; all pairs are evaluated so
/// the verdict is exactly invariant under row and column permutations.
inline bool unistochastic3_check(const DoublyStochastic& x, double tol = 1e-10) {
    require(x.dim() == 3, Errc::WrongDimension, "chain-links criterion needs n = 3");
    const std::size_t pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& pr : pairs) {
        double link[3];
        for (std::size_t c = 0; c < 3; ++c)
            link[c] = std::sqrt(std::max(0.0, x(pr[0], c)) * std::max(0.0, x(pr[1], c)));
        for (std::size_t c = 0; c < 3; ++c)
            if (link[c] > link[(c + 1) % 3] + link[(c + 2) % 3] + tol) return false;
    }
    return true;
}

/// Action of the unital trace-preserving positive diagonal channel induced by
/// X on diag(d); simply X d.
inline std::vector<double> ds_as_diagonal_channel(const DoublyStochastic& x,
                                                  std::span<const double> d) {
    return x.apply(d);
}

}  // namespace majorize
