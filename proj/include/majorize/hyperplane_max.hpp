#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "majorize/abelian_family.hpp"
#include "majorize/errors.hpp"
#include "majorize/random.hpp"

namespace majorize {

struct AffinePiece {
    std::vector<double> coefficients;
    double offset = 0.0;
};

/// Convex test function g(x) = max{0, max_i (a_i . x + b_i)}.  With zero
/// pieces g is identically zero.
class HyperplaneMaxFunction {
public:
    HyperplaneMaxFunction() = default;
    explicit HyperplaneMaxFunction(std::vector<AffinePiece> pieces)
        : pieces_(std::move(pieces)) {}

    const std::vector<AffinePiece>& pieces() const { return pieces_; }

    double operator()(std::span<const double> x) const {
        double best = 0.0;
        for (const auto& p : pieces_) {
            require(p.coefficients.size() == x.size(), Errc::DimensionMismatch,
                    "piece arity does not match the point");
            double v = p.offset;
            for (std::size_t j = 0; j < x.size(); ++j) v += p.coefficients[j] * x[j];
            best = std::max(best, v);
        }
        return best;
    }

    std::function<double(std::span<const double>)> as_function() const {
        return [copy = *this](std::span<const double> x) { return copy(x); };
    }

private:
    std::vector<AffinePiece> pieces_;
};

inline double trace_of_function(const EigenColumns& ec, const HyperplaneMaxFunction& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < ec.n(); ++i) s += g(ec.row(i));
    return s / static_cast<double>(ec.n());
}

struct RefuterOptions {
    double margin = 1e-9;
    double grid_step = 0.5;  // offset grid for the single-coordinate witnesses
};

/// Sampled falsifier for tracial majorization: hunts for a convex
/// hyperplane-max g with tr g(A) > tr g(B) + margin.  A hit soundly refutes
/// the ordering; absence is evidence only, not a proof.
///
/// The deterministic witnesses max{0, x_1, ..., x_m} and max{0, +-x_j + b}
/// over an offset grid are tried first, then `trials` seeded random functions
/// with 1..m+2 pieces and coefficients in [-1, 1].
inline std::optional<HyperplaneMaxFunction> tracial_refuter(const EigenColumns& a,
                                                            const EigenColumns& b, int trials,
                                                            std::uint64_t seed,
                                                            const RefuterOptions& opt = {}) {
    require(a.n() == b.n() && a.m() == b.m(), Errc::DimensionMismatch,
            "eigen column shapes differ");
    const std::size_t m = a.m();

    auto refutes = [&](const HyperplaneMaxFunction& g) {
        return trace_of_function(a, g) > trace_of_function(b, g) + opt.margin;
    };

    {
        std::vector<AffinePiece> pieces;
        for (std::size_t j = 0; j < m; ++j) {
            AffinePiece p;
            p.coefficients.assign(m, 0.0);
            p.coefficients[j] = 1.0;
            pieces.push_back(std::move(p));
        }
        HyperplaneMaxFunction g(std::move(pieces));
        if (refutes(g)) return g;
    }

    const double reach = std::ceil(1.0 + std::max(a.max_abs(), b.max_abs()));
    for (std::size_t j = 0; j < m; ++j) {
        for (double sign : {1.0, -1.0}) {
            for (double off = -reach; off <= reach + 1e-12; off += opt.grid_step) {
                AffinePiece p;
                p.coefficients.assign(m, 0.0);
                p.coefficients[j] = sign;
                p.offset = off;
                HyperplaneMaxFunction g(std::vector<AffinePiece>{p});
                if (refutes(g)) return g;
            }
        }
    }

    Rng rng = Rng(seed).fork(0x726566757465ull);
    for (int t = 0; t < trials; ++t) {
        const std::size_t count = 1 + rng.index(m + 2);
        std::vector<AffinePiece> pieces(count);
        for (auto& p : pieces) {
            p.coefficients.resize(m);
            for (auto& c : p.coefficients) c = rng.uniform(-1.0, 1.0);
            p.offset = rng.uniform(-1.0, 1.0);
        }
        HyperplaneMaxFunction g(std::move(pieces));
        if (refutes(g)) return g;
    }
    return std::nullopt;
}

inline std::optional<HyperplaneMaxFunction> tracial_refuter(const AbelianFamily& a,
                                                            const AbelianFamily& b, int trials,
                                                            std::uint64_t seed,
                                                            const RefuterOptions& opt = {}) {
    require(a.dim() == b.dim() && a.size() == b.size(), Errc::DimensionMismatch,
            "families must share n and m");
    return tracial_refuter(joint_diagonalize(a, seed), joint_diagonalize(b, seed), trials, seed,
                           opt);
}

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
};

/// Under-approximation of a continuous convex f by supporting hyperplanes on
/// a grid over the box: the returned g satisfies g <= f everywhere (exact
/// supporting planes) and f - epsilon <= g on the box, provided `subgradient`
/// returns true subgradients and the grid resolves f's modulus of continuity.
inline HyperplaneMaxFunction approximate_convex_from_below(
    const std::function<double(std::span<const double>)>& f,
    const std::function<std::vector<double>(std::span<const double>)>& subgradient,
    const Box& box, double epsilon) {
    require(epsilon > 0.0, Errc::InvalidArgument, "epsilon must be positive");
    require(!box.lo.empty() && box.lo.size() == box.hi.size(), Errc::DimensionMismatch,
            "box bounds");
    const std::size_t m = box.lo.size();

    // Estimate a gradient bound on a coarse probe grid, then choose spacing so
    // the supporting plane at the nearest grid point is within epsilon.
    double grad_bound = 1.0;
    {
        std::vector<double> x(m);
        const std::size_t probes = 4;
        std::vector<std::size_t> idx(m, 0);
        while (true) {
            for (std::size_t j = 0; j < m; ++j)
                x[j] = box.lo[j] +
                       (box.hi[j] - box.lo[j]) * static_cast<double>(idx[j]) / (probes - 1);
            std::vector<double> gsub = subgradient(x);
            double norm = 0.0;
            for (double v : gsub) norm += v * v;
            grad_bound = std::max(grad_bound, std::sqrt(norm));
            std::size_t j = 0;
            while (j < m && ++idx[j] == probes) idx[j++] = 0;
            if (j == m) break;
        }
    }
    const double spacing = epsilon / (2.0 * grad_bound * std::sqrt(static_cast<double>(m)));

    std::vector<AffinePiece> pieces;
    std::vector<std::size_t> steps(m);
    std::size_t total = 1;
    for (std::size_t j = 0; j < m; ++j) {
        steps[j] = std::max<std::size_t>(2, static_cast<std::size_t>(
                                                std::ceil((box.hi[j] - box.lo[j]) / spacing)) +
                                                1);
        total *= steps[j];
        require(total <= 2'000'000, Errc::InvalidArgument, "approximation grid too large");
    }

    std::vector<std::size_t> idx(m, 0);
    std::vector<double> x(m);
    while (true) {
        for (std::size_t j = 0; j < m; ++j)
            x[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * static_cast<double>(idx[j]) /
                                   static_cast<double>(steps[j] - 1);
        AffinePiece p;
        p.coefficients = subgradient(x);
        p.offset = f(x);
        for (std::size_t j = 0; j < m; ++j) p.offset -= p.coefficients[j] * x[j];

        bool duplicate = false;
        for (const auto& q : pieces) {
            double diff = std::abs(q.offset - p.offset);
            for (std::size_t j = 0; j < m; ++j)
                diff = std::max(diff, std::abs(q.coefficients[j] - p.coefficients[j]));
            if (diff <= 1e-12) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) pieces.push_back(std::move(p));

        std::size_t j = 0;
        while (j < m && ++idx[j] == steps[j]) idx[j++] = 0;
        if (j == m) break;
    }
    return HyperplaneMaxFunction(std::move(pieces));
}

}  // namespace majorize
