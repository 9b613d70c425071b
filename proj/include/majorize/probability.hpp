#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "majorize/errors.hpp"

namespace majorize {

/// Nonnegative weights summing to one.  Entries in [-1e-12, 0) are clamped to
/// zero; anything more negative, or a sum off by more than 1e-10, is rejected.
class ProbabilityVector {
public:
    explicit ProbabilityVector(std::vector<double> weights) : weights_(std::move(weights)) {
        double sum = 0.0;
        for (auto& w : weights_) {
            if (w < -1e-12)
                fail(Errc::NotProbability, "negative weight " + std::to_string(w));
            if (w < 0.0) w = 0.0;
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-10)
            fail(Errc::NotProbability, "weights sum to " + std::to_string(sum));
    }

    std::size_t size() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const { return weights_; }

private:
    std::vector<double> weights_;
};

struct MergeResult {
    ProbabilityVector merged;
    /// partitions[j][i] lists the merged indices whose sum recovers weight i
    /// of input vector j.
    std::vector<std::vector<std::vector<std::size_t>>> partitions;
};

/// Product merge of k probability vectors of a common length l into one of
/// length l^k.  Entry p = (i_1,...,i_k) in row-major digit order carries the
/// product t^(1)_{i_1} ... t^(k)_{i_k}; the j-th partition groups indices by
/// their j-th digit.
inline MergeResult merge_probability_vectors(std::span<const ProbabilityVector> vectors) {
    require(!vectors.empty(), Errc::InvalidArgument, "nothing to merge");
    const std::size_t l = vectors.front().size();
    for (const auto& v : vectors)
        require(v.size() == l, Errc::LengthMismatch, "probability vectors differ in length");

    const std::size_t k = vectors.size();
    double total = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
        total *= static_cast<double>(l);
        require(total <= 1e7, Errc::InvalidArgument, "merged vector would be too large");
    }
    const std::size_t count = static_cast<std::size_t>(total);

    std::vector<double> merged(count, 1.0);
    std::vector<std::vector<std::vector<std::size_t>>> partitions(
        k, std::vector<std::vector<std::size_t>>(l));

    for (std::size_t p = 0; p < count; ++p) {
        std::size_t rest = p;
        // digits from least significant = last vector
        std::vector<std::size_t> digit(k);
        for (std::size_t j = k; j-- > 0;) {
            digit[j] = rest % l;
            rest /= l;
        }
        for (std::size_t j = 0; j < k; ++j) {
            merged[p] *= vectors[j][digit[j]];
            partitions[j][digit[j]].push_back(p);
        }
    }
    return MergeResult{ProbabilityVector(std::move(merged)), std::move(partitions)};
}

}  // namespace majorize
