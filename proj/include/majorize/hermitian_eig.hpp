#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "majorize/complex_matrix.hpp"
#include "majorize/errors.hpp"

namespace majorize {

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // descending
    Unitary eigenvectors;             // columns; A = V diag(eigenvalues) V*
};

namespace detail {

/// One cyclic complex Jacobi pass over the strict upper triangle.
/// Rotations are U = [[c, s e^{i phi}], [-s e^{-i phi}, c]] chosen to zero
/// B(p,q); V accumulates so that V* A V stays equal to B.
inline bool jacobi_sweep(ComplexMatrix& b, ComplexMatrix& v, double threshold) {
    const std::size_t n = b.rows();
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const Complex beta = b(p, q);
            const double mag = std::abs(beta);
            if (mag <= threshold) continue;
            rotated = true;

            const double alpha = b(p, p).real();
            const double gamma = b(q, q).real();
            const double phi = std::atan2(beta.imag(), beta.real());
            const double theta = 0.5 * std::atan2(2.0 * mag, gamma - alpha);
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            const Complex eip(std::cos(phi), std::sin(phi));
            const Complex u_pq = s * eip;          // U(p,q)
            const Complex u_qp = -s * std::conj(eip);  // U(q,p)

            // B <- U* B U, touching only rows/cols p and q.
            for (std::size_t k = 0; k < n; ++k) {
                const Complex bkp = b(k, p), bkq = b(k, q);
                b(k, p) = bkp * c + bkq * u_qp;
                b(k, q) = bkp * u_pq + bkq * c;
            }
            for (std::size_t k = 0; k < n; ++k) {
                const Complex bpk = b(p, k), bqk = b(q, k);
                b(p, k) = c * bpk + std::conj(u_qp) * bqk;
                b(q, k) = std::conj(u_pq) * bpk + c * bqk;
            }
            b(p, q) = 0.0;
            b(q, p) = 0.0;
            b(p, p) = Complex(b(p, p).real(), 0.0);
            b(q, q) = Complex(b(q, q).real(), 0.0);

            for (std::size_t k = 0; k < n; ++k) {
                const Complex vkp = v(k, p), vkq = v(k, q);
                v(k, p) = vkp * c + vkq * u_qp;
                v(k, q) = vkp * u_pq + vkq * c;
            }
        }
    }
    return rotated;
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.
/// Eigenvalues come back sorted descending; the post-condition
/// max|A - V D V*| <= diagonal tolerance is verified before returning.
inline EigenDecomposition hermitian_eigendecompose(const ComplexMatrix& a,
                                                   const Tolerances& tol = {}) {
    require(a.square(), Errc::NotHermitian, "eigendecomposition needs a square matrix");
    const std::size_t n = a.rows();
    const double scale = a.max_abs();
    if (a.hermitian_deviation() > Tolerances::scaled(tol.hermitian_rel, scale))
        fail(Errc::NotHermitian, "matrix is not Hermitian within tolerance");

    // Symmetrize to strip roundoff-level anti-Hermitian noise.
    ComplexMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));

    ComplexMatrix v = ComplexMatrix::identity(n);
    const double stop = 1e-14 * (1.0 + scale);
    const int max_sweeps = 60;
    int sweep = 0;
    while (b.off_diagonal_max() > stop) {
        if (++sweep > max_sweeps)
            fail(Errc::NoConvergence, "Jacobi sweep budget exhausted");
        detail::jacobi_sweep(b, v, stop * 1e-2);
    }

    std::vector<double> lambda = b.real_diagonal();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return lambda[i] > lambda[j]; });

    std::vector<double> sorted(n);
    ComplexMatrix vs(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        sorted[j] = lambda[order[j]];
        for (std::size_t i = 0; i < n; ++i) vs(i, j) = v(i, order[j]);
    }

    Unitary vec(std::move(vs), 1e-8);
    ComplexMatrix recon = vec.matrix() * ComplexMatrix::diagonal(sorted) * vec.matrix().adjoint();
    if ((recon - a).max_abs() > Tolerances::scaled(tol.diagonal_rel, scale))
        fail(Errc::NoConvergence, "reconstruction exceeds diagonal tolerance");

    return EigenDecomposition{std::move(sorted), std::move(vec)};
}

/// Moore-Penrose pseudoinverse of a real symmetric PSD matrix (stored as
/// ComplexMatrix with zero imaginary part), via the Jacobi eigensolver.
inline ComplexMatrix symmetric_pseudoinverse(const ComplexMatrix& g, double rel_cutoff = 1e-12) {
    EigenDecomposition ed = hermitian_eigendecompose(g);
    const std::size_t n = g.rows();
    const double lmax = ed.eigenvalues.empty() ? 0.0 : std::abs(ed.eigenvalues.front());
    std::vector<double> inv(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(ed.eigenvalues[i]) > rel_cutoff * (1.0 + lmax))
            inv[i] = 1.0 / ed.eigenvalues[i];
    return ed.eigenvectors.matrix() * ComplexMatrix::diagonal(inv) *
           ed.eigenvectors.matrix().adjoint();
}

}  // namespace majorize
