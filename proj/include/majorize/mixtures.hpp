#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "majorize/abelian_family.hpp"
#include "majorize/birkhoff.hpp"
#include "majorize/complex_matrix.hpp"
#include "majorize/doubly_stochastic.hpp"
#include "majorize/errors.hpp"
#include "majorize/probability.hpp"

namespace majorize {

/// Convex combination of unitary conjugations: weights t_i and unitaries W_i
/// certifying A_j = sum_i t_i W_i* B_j W_i for every member j.
struct UnitaryMixture {
    ProbabilityVector weights;
    std::vector<Unitary> unitaries;

    UnitaryMixture(ProbabilityVector w, std::vector<Unitary> u)
        : weights(std::move(w)), unitaries(std::move(u)) {
        require(weights.size() == unitaries.size(), Errc::LengthMismatch,
                "weights and unitaries must pair up");
        for (const auto& un : unitaries)
            require(un.dim() == unitaries.front().dim(), Errc::DimensionMismatch,
                    "unitary dimensions differ");
    }

    std::size_t terms() const { return weights.size(); }
    std::size_t dim() const { return unitaries.empty() ? 0 : unitaries.front().dim(); }

    ComplexMatrix apply(const ComplexMatrix& b) const {
        ComplexMatrix acc(b.rows(), b.cols());
        for (std::size_t i = 0; i < terms(); ++i) {
            if (weights[i] == 0.0) continue;
            acc += Complex(weights[i]) * unitaries[i].conjugate(b);
        }
        return acc;
    }
};

/// max over members of the entrywise gap between A_j and the mixed image of
/// B_j.
inline double mixture_residual(const UnitaryMixture& mix, const AbelianFamily& a,
                               const AbelianFamily& b) {
    require(a.dim() == b.dim() && a.size() == b.size(), Errc::DimensionMismatch,
            "family shapes differ");
    require(mix.dim() == a.dim(), Errc::DimensionMismatch, "mixture dimension");
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        worst = std::max(worst, (a.member(j) - mix.apply(b.member(j))).max_abs());
    return worst;
}

/// Rewrites a diagonal-level certificate into one for the original families:
/// diag(a) = sum t M* diag(b) M becomes A = sum t (V*MU)* B (V*MU), where U
/// and V are the diagonalizers of A and B.
inline UnitaryMixture conjugate_mixture(const UnitaryMixture& mix, const Unitary& diag_a,
                                        const Unitary& diag_b) {
    const ComplexMatrix& u = diag_a.matrix();
    const ComplexMatrix vt = diag_b.matrix().adjoint();
    std::vector<Unitary> out;
    out.reserve(mix.terms());
    for (const auto& w : mix.unitaries) out.emplace_back(vt * w.matrix() * u, 1e-8);
    return UnitaryMixture(mix.weights, std::move(out));
}

/// Certificate from a doubly stochastic witness: Birkhoff-decompose X into
/// sum t_i P_i and conjugate the permutations by the diagonalizers,
/// W_i = V* P_i^T U.
inline UnitaryMixture mixture_from_ds(const DoublyStochastic& x, const EigenColumns& diag_a,
                                      const EigenColumns& diag_b) {
    require(x.dim() == diag_a.n() && diag_a.n() == diag_b.n() && diag_a.m() == diag_b.m(),
            Errc::DimensionMismatch, "witness and eigen data disagree");
    std::vector<BirkhoffTerm> terms = birkhoff_decompose(x);
    const ComplexMatrix& u = diag_a.diagonalizer().matrix();
    const ComplexMatrix vt = diag_b.diagonalizer().matrix().adjoint();
    std::vector<double> weights;
    std::vector<Unitary> unitaries;
    weights.reserve(terms.size());
    unitaries.reserve(terms.size());
    for (const auto& t : terms) {
        weights.push_back(t.weight);
        unitaries.emplace_back(vt * t.permutation.to_matrix_transposed() * u, 1e-8);
    }
    return UnitaryMixture(ProbabilityVector(std::move(weights)), std::move(unitaries));
}

namespace detail {

inline std::vector<std::size_t> descending_order(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    return order;
}

inline bool majorizes(std::span<const double> a, std::span<const double> b, double tol) {
    // a majorized by b on sorted partial sums, with equal totals.
    std::vector<double> as(a.begin(), a.end()), bs(b.begin(), b.end());
    std::sort(as.rbegin(), as.rend());
    std::sort(bs.rbegin(), bs.rend());
    double pa = 0.0, pb = 0.0;
    for (std::size_t k = 0; k < as.size(); ++k) {
        pa += as[k];
        pb += bs[k];
        if (pa > pb + tol) return false;
    }
    return std::abs(pa - pb) <= tol;
}

inline ComplexMatrix planar_rotation(std::size_t n, std::size_t i, std::size_t j, double theta,
                                     bool flip_sign) {
    ComplexMatrix w = ComplexMatrix::identity(n);
    const double c = std::cos(theta), s = std::sin(theta);
    // columns i and j carry the 2x2 rotation block
    w(i, i) = c;
    w(j, j) = c;
    if (!flip_sign) {
        w(j, i) = s;   // W e_i = c e_i + s e_j
        w(i, j) = -s;  // W e_j = -s e_i + c e_j
    } else {
        w(j, i) = -s;
        w(i, j) = s;
    }
    return w;
}

}  // namespace detail

struct TTransformCertificate {
    std::vector<TTransform> chain;  // indices refer to descending-sorted positions
    UnitaryMixture mixture;         // certifies diag(a) from diag(b)
};

/// Single-member majorization certificate: build the chain c_0 = b, ...,
/// c_{n-1} = a of two-entry averages, realize each step by a pair of planar
/// rotations with angle arccos(sqrt(t)), and expand the nested halves into
/// exactly 2^(n-1) unitaries of uniform weight.
inline TTransformCertificate t_transform_chain(std::span<const double> a,
                                               std::span<const double> b,
                                               double tol = 1e-9) {
    require(a.size() == b.size() && !a.empty(), Errc::DimensionMismatch, "vector lengths");
    const std::size_t n = a.size();
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    for (double v : b) scale = std::max(scale, std::abs(v));
    const double mtol = tol * (1.0 + scale);
    if (!detail::majorizes(a, b, mtol)) fail(Errc::NotMajorized, "a is not majorized by b");

    const std::vector<std::size_t> oa = detail::descending_order(a);
    const std::vector<std::size_t> ob = detail::descending_order(b);
    std::vector<double> target(n), current(n);
    for (std::size_t i = 0; i < n; ++i) {
        target[i] = a[oa[i]];
        current[i] = b[ob[i]];
    }

    std::vector<TTransform> chain;
    while (true) {
        std::size_t i = n;
        for (std::size_t k = 0; k < n; ++k) {
            if (current[k] > target[k] + mtol) {
                i = k;
                break;
            }
        }
        if (i == n) break;  // chain complete
        require(chain.size() < n, Errc::SolverFailure, "chain failed to terminate");
        std::size_t j = n;
        for (std::size_t k = i + 1; k < n; ++k) {
            if (current[k] < target[k] - mtol) {
                j = k;
                break;
            }
        }
        require(j < n, Errc::NotMajorized, "no balancing index; totals differ");
        const double delta = std::min(current[i] - target[i], target[j] - current[j]);
        const double t = 1.0 - delta / (current[i] - current[j]);
        TTransform tt(i, j, std::clamp(t, 0.0, 1.0));
        current = tt.apply(current);
        // pin matched entries exactly to kill drift
        if (std::abs(current[i] - target[i]) <= mtol) current[i] = target[i];
        if (std::abs(current[j] - target[j]) <= mtol) current[j] = target[j];
        chain.push_back(tt);
    }

    // Expand: each step contributes a +/- rotation pair; a binary word picks
    // one per step and the product (chain order, left to right) is the word's
    // unitary.  Pad with repeats so exactly 2^(n-1) terms always come out.
    const std::size_t total = n >= 1 ? (std::size_t{1} << (n - 1)) : 1;
    std::vector<ComplexMatrix> sorted_level;
    const std::size_t words = std::size_t{1} << chain.size();
    sorted_level.reserve(words);
    for (std::size_t w = 0; w < words; ++w) {
        ComplexMatrix prod = ComplexMatrix::identity(n);
        for (std::size_t k = 0; k < chain.size(); ++k) {
            const double theta = std::acos(std::sqrt(chain[k].t));
            prod = prod * detail::planar_rotation(n, chain[k].i, chain[k].j, theta,
                                                  (w >> k) & 1u);
        }
        sorted_level.push_back(std::move(prod));
    }

    // Undo the sorting: diag(a) = Pa^T diag(a_sorted) Pa with (Pa)_{i,oa(i)}=1.
    const PermutationMatrix pa{std::vector<std::size_t>(oa)};
    const PermutationMatrix pb{std::vector<std::size_t>(ob)};
    const ComplexMatrix pa_m = pa.to_matrix();
    const ComplexMatrix pbt_m = pb.to_matrix_transposed();

    std::vector<Unitary> unitaries;
    std::vector<double> weights(total, 1.0 / static_cast<double>(total));
    unitaries.reserve(total);
    const std::size_t repeat = total / words;
    for (std::size_t w = 0; w < words; ++w) {
        ComplexMatrix full = pbt_m * sorted_level[w] * pa_m;
        for (std::size_t r = 0; r < repeat; ++r) unitaries.emplace_back(full, 1e-8);
    }
    return TTransformCertificate{std::move(chain),
                                 UnitaryMixture(ProbabilityVector(std::move(weights)),
                                                std::move(unitaries))};
}

/// Direct-sum combination: pads the block certificates to a common length,
/// product-merges their weight vectors into one, and pairs each merged index
/// with the block-diagonal unitary its digits select.  Terms whose merged
/// weight is exactly zero (padding) are dropped.
inline UnitaryMixture combine_direct_sum(std::span<const UnitaryMixture> blocks) {
    require(!blocks.empty(), Errc::EmptyBlocks, "no blocks to combine");
    const std::size_t k = blocks.size();
    std::size_t common = 0;
    std::size_t total_dim = 0;
    for (const auto& blk : blocks) {
        common = std::max(common, blk.terms());
        total_dim += blk.dim();
    }

    std::vector<ProbabilityVector> padded;
    padded.reserve(k);
    for (const auto& blk : blocks) {
        std::vector<double> w(blk.weights.weights().begin(), blk.weights.weights().end());
        w.resize(common, 0.0);
        padded.emplace_back(std::move(w));
    }

    // Identical weight vectors force the partition: pair the blocks term by
    // term instead of blowing the product merge up to common^k entries.
    bool identical = true;
    for (std::size_t j = 1; j < k && identical; ++j)
        for (std::size_t i = 0; i < common && identical; ++i)
            identical = padded[j][i] == padded[0][i];
    if (identical) {
        std::vector<double> weights;
        std::vector<Unitary> unitaries;
        for (std::size_t q = 0; q < common; ++q) {
            if (padded[0][q] == 0.0) continue;
            ComplexMatrix big(total_dim, total_dim);
            std::size_t off = 0;
            for (std::size_t j = 0; j < k; ++j) {
                const std::size_t d = blocks[j].dim();
                if (q < blocks[j].terms()) {
                    const ComplexMatrix& u = blocks[j].unitaries[q].matrix();
                    for (std::size_t r = 0; r < d; ++r)
                        for (std::size_t c = 0; c < d; ++c) big(off + r, off + c) = u(r, c);
                } else {
                    for (std::size_t r = 0; r < d; ++r) big(off + r, off + r) = 1.0;
                }
                off += d;
            }
            weights.push_back(padded[0][q]);
            unitaries.emplace_back(std::move(big), 1e-8);
        }
        return UnitaryMixture(ProbabilityVector(std::move(weights)), std::move(unitaries));
    }

    MergeResult merged = merge_probability_vectors(padded);

    std::vector<double> weights;
    std::vector<Unitary> unitaries;
    const std::size_t count = merged.merged.size();
    for (std::size_t q = 0; q < count; ++q) {
        const double wq = merged.merged[q];
        if (wq == 0.0) continue;
        std::size_t rest = q;
        std::vector<std::size_t> digit(k);
        for (std::size_t j = k; j-- > 0;) {
            digit[j] = rest % common;
            rest /= common;
        }
        ComplexMatrix big(total_dim, total_dim);
        std::size_t off = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t d = blocks[j].dim();
            if (digit[j] < blocks[j].terms()) {
                const ComplexMatrix& u = blocks[j].unitaries[digit[j]].matrix();
                for (std::size_t r = 0; r < d; ++r)
                    for (std::size_t c = 0; c < d; ++c) big(off + r, off + c) = u(r, c);
            } else {
                for (std::size_t r = 0; r < d; ++r) big(off + r, off + r) = 1.0;
            }
            off += d;
        }
        weights.push_back(wq);
        unitaries.emplace_back(std::move(big), 1e-8);
    }
    return UnitaryMixture(ProbabilityVector(std::move(weights)), std::move(unitaries));
}

/// Direct sum of families, for checking combined certificates.
inline AbelianFamily direct_sum(std::span<const AbelianFamily> blocks) {
    require(!blocks.empty(), Errc::EmptyBlocks, "no blocks");
    const std::size_t m = blocks.front().size();
    std::size_t total = 0;
    for (const auto& b : blocks) {
        require(b.size() == m, Errc::DimensionMismatch, "member counts differ");
        total += b.dim();
    }
    std::vector<ComplexMatrix> members;
    for (std::size_t j = 0; j < m; ++j) {
        ComplexMatrix big(total, total);
        std::size_t off = 0;
        for (const auto& b : blocks) {
            for (std::size_t r = 0; r < b.dim(); ++r)
                for (std::size_t c = 0; c < b.dim(); ++c)
                    big(off + r, off + c) = b.member(j)(r, c);
            off += b.dim();
        }
        members.push_back(std::move(big));
    }
    return AbelianFamily(std::move(members));
}

}  // namespace majorize
