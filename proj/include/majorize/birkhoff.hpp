#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "majorize/doubly_stochastic.hpp"
#include "majorize/errors.hpp"
#include "majorize/hermitian_eig.hpp"
#include "majorize/probability.hpp"

namespace majorize {

struct BirkhoffTerm {
    double weight;
    PermutationMatrix permutation;
};

struct BirkhoffOptions {
    double support_tol = 1e-12;  // entries at or below count as zero
    double cleanup_tol = 1e-10;  // residual mass allowed to be discarded
};

namespace detail {

/// Kuhn augmenting-path matching of rows to columns over an admissibility
/// mask; returns row -> column or nothing if no perfect matching exists.
inline bool try_augment(const std::vector<std::vector<bool>>& adm, std::size_t row,
                        std::vector<bool>& visited, std::vector<std::ptrdiff_t>& col_match) {
    const std::size_t n = adm.size();
    for (std::size_t c = 0; c < n; ++c) {
        if (!adm[row][c] || visited[c]) continue;
        visited[c] = true;
        if (col_match[c] < 0 ||
            try_augment(adm, static_cast<std::size_t>(col_match[c]), visited, col_match)) {
            col_match[c] = static_cast<std::ptrdiff_t>(row);
            return true;
        }
    }
    return false;
}

inline std::vector<std::size_t> perfect_matching(const std::vector<std::vector<bool>>& adm) {
    const std::size_t n = adm.size();
    std::vector<std::ptrdiff_t> col_match(n, -1);
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<bool> visited(n, false);
        if (!try_augment(adm, r, visited, col_match)) return {};
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t c = 0; c < n; ++c) row_to_col[static_cast<std::size_t>(col_match[c])] = c;
    return row_to_col;
}

/// Caratheodory pruning: while more terms remain than the affine dimension of
/// the Birkhoff polytope allows, cancel one along an affine dependency.
inline void reduce_terms(std::vector<BirkhoffTerm>& terms, std::size_t n) {
    const std::size_t bound = n * n - 2 * n + 2;
    while (terms.size() > bound) {
        const std::size_t t = terms.size();
        // M columns are [vec(P_i); 1]; find mu in ker(M) via ker(M^T M).
        ComplexMatrix gram(t, t);
        for (std::size_t a = 0; a < t; ++a) {
            for (std::size_t b = 0; b < t; ++b) {
                double dot = 1.0;  // the appended all-ones row
                for (std::size_t i = 0; i < n; ++i)
                    dot += (terms[a].permutation(i) == terms[b].permutation(i)) ? 1.0 : 0.0;
                gram(a, b) = dot;
            }
        }
        EigenDecomposition ed = hermitian_eigendecompose(gram);
        const double lmax = std::abs(ed.eigenvalues.front());
        if (std::abs(ed.eigenvalues.back()) > 1e-10 * (1.0 + lmax)) break;  // numerically full rank
        std::vector<double> mu(t);
        for (std::size_t a = 0; a < t; ++a)
            mu[a] = ed.eigenvectors.matrix()(a, t - 1).real();

        double theta = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < t; ++a)
            if (mu[a] > 1e-14) theta = std::min(theta, terms[a].weight / mu[a]);
        if (!std::isfinite(theta)) {
            for (auto& v : mu) v = -v;
            theta = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < t; ++a)
                if (mu[a] > 1e-14) theta = std::min(theta, terms[a].weight / mu[a]);
            if (!std::isfinite(theta)) break;
        }
        std::vector<BirkhoffTerm> kept;
        bool dropped = false;
        for (std::size_t a = 0; a < t; ++a) {
            const double w = terms[a].weight - theta * mu[a];
            if (!dropped && w <= 1e-14) {
                dropped = true;
                continue;
            }
            kept.push_back({std::max(0.0, w), terms[a].permutation});
        }
        if (!dropped || kept.size() >= terms.size()) break;
        terms = std::move(kept);
    }
}

}  // namespace detail

/// Greedy Birkhoff-von Neumann decomposition: repeatedly extract a permutation
/// supported on the strictly positive entries of the residual, weighted by the
/// minimum matched entry.  A Caratheodory pruning pass enforces the
/// n^2 - 2n + 2 term bound; weights are normalized into a probability vector.
inline std::vector<BirkhoffTerm> birkhoff_decompose(const DoublyStochastic& x,
                                                    const BirkhoffOptions& opt = {}) {
    const std::size_t n = x.dim();
    std::vector<double> resid(x.entries().begin(), x.entries().end());
    for (auto& e : resid) e = std::max(0.0, e);

    std::vector<BirkhoffTerm> terms;
    for (std::size_t iter = 0; iter < n * n + 2; ++iter) {
        double max_entry = 0.0;
        for (double e : resid) max_entry = std::max(max_entry, e);
        if (max_entry <= opt.cleanup_tol) break;

        std::vector<std::vector<bool>> adm(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) adm[i][j] = resid[i * n + j] > opt.support_tol;
        std::vector<std::size_t> match = detail::perfect_matching(adm);
        if (match.empty()) {
            // Input noise can leave a disconnected residual; discard it while
            // the reconstruction contract (1e-9) still holds, otherwise the
            // matrix really is broken.
            double worst_row = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double mass = 0.0;
                for (std::size_t j = 0; j < n; ++j) mass += resid[i * n + j];
                worst_row = std::max(worst_row, mass);
            }
            if (worst_row <= 5e-10) break;
            fail(Errc::NoPerfectMatching, "positive support admits no permutation");
        }

        double w = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) w = std::min(w, resid[i * n + match[i]]);
        for (std::size_t i = 0; i < n; ++i) {
            double& e = resid[i * n + match[i]];
            e -= w;
            if (e <= opt.support_tol) e = 0.0;
        }
        terms.push_back({w, PermutationMatrix(std::vector<std::size_t>(match))});
    }
    require(!terms.empty(), Errc::NoPerfectMatching, "no mass extracted");

    detail::reduce_terms(terms, n);

    double sum = 0.0;
    for (const auto& t : terms) sum += t.weight;
    for (auto& t : terms) t.weight /= sum;
    return terms;
}

inline ProbabilityVector birkhoff_weights(const std::vector<BirkhoffTerm>& terms) {
    std::vector<double> w;
    w.reserve(terms.size());
    for (const auto& t : terms) w.push_back(t.weight);
    return ProbabilityVector(std::move(w));
}

inline double birkhoff_reconstruction_error(const std::vector<BirkhoffTerm>& terms,
                                            const DoublyStochastic& x) {
    const std::size_t n = x.dim();
    std::vector<double> recon(n * n, 0.0);
    for (const auto& t : terms)
        for (std::size_t i = 0; i < n; ++i) recon[i * n + t.permutation(i)] += t.weight;
    double worst = 0.0;
    for (std::size_t k = 0; k < recon.size(); ++k)
        worst = std::max(worst, std::abs(recon[k] - x.entries()[k]));
    return worst;
}

}  // namespace majorize
