#pragma once

// Shared test-side generators: random unitaries, random doubly stochastic
// matrices, and random commuting families built from eigen data.

#include <cmath>
#include <complex>
#include <vector>

#include "majorize/majorize.hpp"

namespace testgen {

using majorize::AbelianFamily;
using majorize::Complex;
using majorize::ComplexMatrix;
using majorize::DoublyStochastic;
using majorize::Rng;
using majorize::Unitary;

/// Haar-ish random unitary: complex Gaussian matrix, modified Gram-Schmidt.
inline Unitary random_unitary(std::size_t n, Rng& rng) {
    ComplexMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            Complex dot(0.0, 0.0);
            for (std::size_t r = 0; r < n; ++r) dot += std::conj(g(r, prev)) * g(r, c);
            for (std::size_t r = 0; r < n; ++r) g(r, c) -= dot * g(r, prev);
        }
        double norm = 0.0;
        for (std::size_t r = 0; r < n; ++r) norm += std::norm(g(r, c));
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < n; ++r) g(r, c) /= norm;
    }
    // second pass tightens orthogonality to machine precision
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            Complex dot(0.0, 0.0);
            for (std::size_t r = 0; r < n; ++r) dot += std::conj(g(r, prev)) * g(r, c);
            for (std::size_t r = 0; r < n; ++r) g(r, c) -= dot * g(r, prev);
        }
        double norm = 0.0;
        for (std::size_t r = 0; r < n; ++r) norm += std::norm(g(r, c));
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < n; ++r) g(r, c) /= norm;
    }
    return Unitary(std::move(g));
}

/// Eigen data drawn uniform in [-1, 1], one column per member.
inline std::vector<std::vector<double>> random_eigendata(std::size_t n, std::size_t m,
                                                         Rng& rng) {
    std::vector<std::vector<double>> cols(m, std::vector<double>(n));
    for (auto& col : cols)
        for (auto& v : col) v = rng.uniform(-1.0, 1.0);
    return cols;
}

/// Commuting family V diag(col_j) V* with one common random diagonalizer.
inline AbelianFamily family_from_eigendata(const std::vector<std::vector<double>>& cols,
                                           const Unitary& v) {
    std::vector<ComplexMatrix> members;
    for (const auto& col : cols)
        members.push_back(v.matrix() * ComplexMatrix::diagonal(col) * v.matrix().adjoint());
    return AbelianFamily(std::move(members));
}

inline AbelianFamily random_family(std::size_t n, std::size_t m, Rng& rng) {
    Unitary v = random_unitary(n, rng);
    return family_from_eigendata(random_eigendata(n, m, rng), v);
}

/// Random doubly stochastic matrix: convex combination of random permutations.
inline DoublyStochastic random_doubly_stochastic(std::size_t n, Rng& rng,
                                                 std::size_t perms = 0) {
    if (perms == 0) perms = n + 1;
    std::vector<double> weights(perms);
    double sum = 0.0;
    for (auto& w : weights) {
        w = rng.uniform(0.05, 1.0);
        sum += w;
    }
    for (auto& w : weights) w /= sum;
    std::vector<double> entries(n * n, 0.0);
    for (std::size_t p = 0; p < perms; ++p) {
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (std::size_t i = n; i-- > 1;) std::swap(perm[i], perm[rng.index(i + 1)]);
        for (std::size_t i = 0; i < n; ++i) entries[i * n + perm[i]] += weights[p];
    }
    return DoublyStochastic(n, std::move(entries));
}

/// Majorized pair: eigen data for B random, eigen data for A = X * (B data)
/// with X a random doubly stochastic mixing matrix; independent random
/// diagonalizers on both sides.
struct MajorizedPair {
    AbelianFamily a;
    AbelianFamily b;
};

inline MajorizedPair random_majorized_pair(std::size_t n, std::size_t m, Rng& rng) {
    auto bcols = random_eigendata(n, m, rng);
    DoublyStochastic x = random_doubly_stochastic(n, rng);
    std::vector<std::vector<double>> acols(m, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) acols[j][i] += x(i, k) * bcols[j][k];
    }
    Unitary va = random_unitary(n, rng);
    Unitary vb = random_unitary(n, rng);
    return MajorizedPair{family_from_eigendata(acols, va), family_from_eigendata(bcols, vb)};
}

}  // namespace testgen
