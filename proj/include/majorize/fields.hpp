#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "majorize/abelian_family.hpp"
#include "majorize/complex_matrix.hpp"
#include "majorize/doubly_stochastic.hpp"
#include "majorize/errors.hpp"
#include "majorize/probability.hpp"

namespace majorize {

/// Finite sample of a compact metric space: distinct points with Euclidean
/// coordinates.  One-dimensional grids must be strictly increasing.
class GridSpace {
public:
    explicit GridSpace(std::vector<std::vector<double>> points) : points_(std::move(points)) {
        require(!points_.empty(), Errc::InvalidArgument, "grid needs at least one point");
        dim_ = points_.front().size();
        require(dim_ >= 1, Errc::InvalidArgument, "points need coordinates");
        for (const auto& p : points_)
            require(p.size() == dim_, Errc::DimensionMismatch, "mixed point dimensions");
        if (dim_ == 1) {
            for (std::size_t k = 1; k < points_.size(); ++k)
                require(points_[k][0] > points_[k - 1][0], Errc::InvalidArgument,
                        "1-d grid coordinates must be strictly increasing");
        } else {
            for (std::size_t a = 0; a < points_.size(); ++a)
                for (std::size_t b = a + 1; b < points_.size(); ++b)
                    require(distance(a, b) > 0.0, Errc::InvalidArgument,
                            "grid points must be distinct");
        }
    }

    /// Uniform 1-d grid over [lo, hi]; the endpoint count is chosen so the
    /// step is honored exactly (x_k = lo + k * step).
    static GridSpace interval(double lo, double hi, double step) {
        require(step > 0.0 && hi > lo, Errc::InvalidArgument, "bad interval");
        const auto count = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
        std::vector<std::vector<double>> pts;
        pts.reserve(count);
        for (std::size_t k = 0; k < count; ++k)
            pts.push_back({lo + static_cast<double>(k) * step});
        return GridSpace(std::move(pts));
    }

    std::size_t size() const { return points_.size(); }
    std::size_t dim() const { return dim_; }
    const std::vector<double>& point(std::size_t k) const { return points_[k]; }
    double coordinate(std::size_t k) const { return points_[k][0]; }

    double distance(std::size_t a, std::size_t b) const {
        double s = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
            const double d = points_[a][j] - points_[b][j];
            s += d * d;
        }
        return std::sqrt(s);
    }

    bool same_as(const GridSpace& o) const {
        if (o.dim_ != dim_ || o.points_.size() != points_.size()) return false;
        for (std::size_t k = 0; k < points_.size(); ++k)
            for (std::size_t j = 0; j < dim_; ++j)
                if (points_[k][j] != o.points_[k][j]) return false;
        return true;
    }

private:
    std::vector<std::vector<double>> points_;
    std::size_t dim_ = 0;
};

/// Grid-sampled commuting family: one AbelianFamily per point, all sharing n
/// and m.
class MatrixField {
public:
    MatrixField(GridSpace space, std::vector<AbelianFamily> families)
        : space_(std::move(space)), families_(std::move(families)) {
        require(families_.size() == space_.size(), Errc::DimensionMismatch,
                "one family per grid point");
        n_ = families_.front().dim();
        m_ = families_.front().size();
        for (const auto& f : families_)
            require(f.dim() == n_ && f.size() == m_, Errc::DimensionMismatch,
                    "families must share n and m across points");
    }

    const GridSpace& space() const { return space_; }
    std::size_t points() const { return space_.size(); }
    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    const AbelianFamily& at(std::size_t k) const { return families_[k]; }

private:
    GridSpace space_;
    std::vector<AbelianFamily> families_;
    std::size_t n_ = 0;
    std::size_t m_ = 0;
};

/// Grid-sampled doubly stochastic field.
class DSField {
public:
    DSField(GridSpace space, std::vector<DoublyStochastic> values)
        : space_(std::move(space)), values_(std::move(values)) {
        require(values_.size() == space_.size(), Errc::DimensionMismatch,
                "one matrix per grid point");
        for (const auto& v : values_)
            require(v.dim() == values_.front().dim(), Errc::DimensionMismatch,
                    "dimensions differ across points");
    }

    const GridSpace& space() const { return space_; }
    std::size_t points() const { return space_.size(); }
    std::size_t dim() const { return values_.front().dim(); }
    const DoublyStochastic& at(std::size_t k) const { return values_[k]; }

    double max_consecutive_jump() const {
        double worst = 0.0;
        for (std::size_t k = 1; k < values_.size(); ++k)
            worst = std::max(worst, values_[k].frobenius_distance(values_[k - 1]));
        return worst;
    }

private:
    GridSpace space_;
    std::vector<DoublyStochastic> values_;
};

/// Piecewise-constant mixture certificate over a grid: one global weight
/// vector, per-term unitary fields, and the declared cells on which every
/// unitary field is constant.
class MixtureField {
public:
    MixtureField(ProbabilityVector weights, std::vector<std::vector<Unitary>> unitary_fields,
                 std::vector<std::vector<std::size_t>> cells, std::size_t points)
        : weights_(std::move(weights)),
          unitary_fields_(std::move(unitary_fields)),
          cells_(std::move(cells)),
          points_(points) {
        require(unitary_fields_.size() == weights_.size(), Errc::LengthMismatch,
                "one unitary field per weight");
        for (const auto& uf : unitary_fields_)
            require(uf.size() == points_, Errc::DimensionMismatch,
                    "unitary fields must cover every point");
        std::vector<bool> seen(points_, false);
        for (const auto& cell : cells_) {
            for (std::size_t p : cell) {
                require(p < points_ && !seen[p], Errc::InvalidArgument,
                        "cells must partition the grid");
                seen[p] = true;
            }
        }
        for (bool s : seen)
            require(s, Errc::InvalidArgument, "cells must cover the grid");
    }

    std::size_t terms() const { return weights_.size(); }
    std::size_t points() const { return points_; }
    const ProbabilityVector& weights() const { return weights_; }
    const Unitary& unitary(std::size_t term, std::size_t point) const {
        return unitary_fields_[term][point];
    }
    const std::vector<std::vector<std::size_t>>& cells() const { return cells_; }

    /// Mixed image of B's member j at a point.
    ComplexMatrix apply(const ComplexMatrix& bj, std::size_t point) const {
        ComplexMatrix acc(bj.rows(), bj.cols());
        for (std::size_t t = 0; t < terms(); ++t) {
            if (weights_[t] == 0.0) continue;
            acc += Complex(weights_[t]) * unitary_fields_[t][point].conjugate(bj);
        }
        return acc;
    }

private:
    ProbabilityVector weights_;
    std::vector<std::vector<Unitary>> unitary_fields_;  // [term][point]
    std::vector<std::vector<std::size_t>> cells_;
    std::size_t points_;
};

inline double field_mixture_residual(const MixtureField& mf, const MatrixField& a,
                                     const MatrixField& b) {
    require(a.space().same_as(b.space()), Errc::SpaceMismatch, "fields live on different grids");
    require(mf.points() == a.points(), Errc::DimensionMismatch, "certificate covers the grid");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.points(); ++k)
        for (std::size_t j = 0; j < a.m(); ++j)
            worst = std::max(worst,
                             (a.at(k).member(j) - mf.apply(b.at(k).member(j), k)).max_abs());
    return worst;
}

/// Per-point residual profile of a field certificate.
inline std::vector<double> field_mixture_residual_series(const MixtureField& mf,
                                                         const MatrixField& a,
                                                         const MatrixField& b) {
    std::vector<double> out(a.points(), 0.0);
    for (std::size_t k = 0; k < a.points(); ++k)
        for (std::size_t j = 0; j < a.m(); ++j)
            out[k] = std::max(out[k],
                              (a.at(k).member(j) - mf.apply(b.at(k).member(j), k)).max_abs());
    return out;
}

// One seed for the whole field: identical per-point families then produce
// bit-identical diagonalizers, so constant stretches stay constant.
inline std::vector<EigenColumns> diagonalize_field(const MatrixField& f, std::uint64_t seed = 0) {
    std::vector<EigenColumns> out;
    out.reserve(f.points());
    for (std::size_t k = 0; k < f.points(); ++k)
        out.push_back(joint_diagonalize(f.at(k), seed));
    return out;
}

}  // namespace majorize
