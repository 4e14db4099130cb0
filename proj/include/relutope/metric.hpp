#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

#include "relutope/bit_vector.hpp"

namespace relutope {

/// Hollow, symmetric, non-negative N x N matrix with one label per row.
/// +inf entries are allowed and mean "never connected". The triangle
/// inequality is not required (min-combined matrices can violate it).
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    /// entries is row-major N x N. Empty labels default to "0".."N-1".
    DistanceMatrix(std::size_t size, std::vector<double> entries, std::vector<std::string> labels = {});

    std::size_t size() const noexcept { return size_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * size_ + j]; }
    const std::vector<double>& entries() const noexcept { return entries_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Largest finite off-diagonal entry (0 for N <= 1).
    double max_finite() const;

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::size_t size_ = 0;
    std::vector<double> entries_;
    std::vector<std::string> labels_;
};

std::size_t hamming(const BitVector& a, const BitVector& b);

struct Deduplicated {
    std::vector<BitVector> distinct;      // first-occurrence order
    std::vector<std::size_t> assignment;  // input index -> index into distinct
};

Deduplicated dedup_bitvectors(const std::vector<BitVector>& vectors);

/// Pairwise Hamming distances. With deduplicate, rows are the distinct vectors and
/// each keeps the label of its first occurrence.
DistanceMatrix hamming_matrix(const std::vector<BitVector>& vectors, bool deduplicate,
                              std::vector<std::string> labels = {});

DistanceMatrix euclidean_matrix(const std::vector<Eigen::VectorXd>& points, std::vector<std::string> labels = {});

enum class CombineOp { min, max };

/// Entrywise min (OR of threshold relations) or max (AND). Sizes and labels must agree.
DistanceMatrix combine(const DistanceMatrix& first, const DistanceMatrix& second, CombineOp op);

}  // namespace relutope
