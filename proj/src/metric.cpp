#include "relutope/metric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "relutope/error.hpp"

namespace relutope {

namespace {

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return labels;
}

}  // namespace

DistanceMatrix::DistanceMatrix(std::size_t size, std::vector<double> entries, std::vector<std::string> labels)
    : size_(size), entries_(std::move(entries)), labels_(std::move(labels)) {
    if (entries_.size() != size_ * size_) {
        throw Error(ErrorKind::dimension_mismatch, "distance matrix of size " + std::to_string(size_) + " needs " +
                                                       std::to_string(size_ * size_) + " entries");
    }
    if (labels_.empty()) labels_ = default_labels(size_);
    if (labels_.size() != size_) throw Error(ErrorKind::dimension_mismatch, "label count does not match matrix size");
    for (std::size_t i = 0; i < size_; ++i) {
        if ((*this)(i, i) != 0.0) {
            throw Error(ErrorKind::parse, "distance matrix is not hollow at " + std::to_string(i));
        }
        for (std::size_t j = 0; j < i; ++j) {
            const double d = (*this)(i, j);
            if (std::isnan(d) || d < 0.0) {
                throw Error(ErrorKind::parse, "distance matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                  ") is negative or NaN");
            }
            if (d != (*this)(j, i)) {
                throw Error(ErrorKind::parse, "distance matrix is not symmetric at (" + std::to_string(i) + "," +
                                                  std::to_string(j) + ")");
            }
        }
    }
}

double DistanceMatrix::max_finite() const {
    double best = 0.0;
    for (double d : entries_) {
        if (std::isfinite(d)) best = std::max(best, d);
    }
    return best;
}

std::size_t hamming(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::dimension_mismatch, "Hamming distance between bit vectors of length " +
                                                       std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    std::size_t d = 0;
    for (std::size_t w = 0; w < a.words().size(); ++w) {
        d += static_cast<std::size_t>(std::popcount(a.words()[w] ^ b.words()[w]));
    }
    return d;
}

Deduplicated dedup_bitvectors(const std::vector<BitVector>& vectors) {
    Deduplicated out;
    out.assignment.reserve(vectors.size());
    std::unordered_map<BitVector, std::size_t, BitVectorHash> seen;
    for (const BitVector& v : vectors) {
        if (!vectors.empty() && v.size() != vectors.front().size()) {
            throw Error(ErrorKind::dimension_mismatch, "bit vectors of mixed lengths");
        }
        const auto [it, inserted] = seen.emplace(v, out.distinct.size());
        if (inserted) out.distinct.push_back(v);
        out.assignment.push_back(it->second);
    }
    return out;
}

DistanceMatrix hamming_matrix(const std::vector<BitVector>& vectors, bool deduplicate,
                              std::vector<std::string> labels) {
    if (vectors.empty()) throw Error(ErrorKind::usage, "Hamming matrix of an empty set of bit vectors");
    if (labels.empty()) labels = default_labels(vectors.size());
    if (labels.size() != vectors.size()) throw Error(ErrorKind::dimension_mismatch, "one label per bit vector");

    std::vector<BitVector> rows = vectors;
    if (deduplicate) {
        Deduplicated d = dedup_bitvectors(vectors);
        std::vector<std::string> kept(d.distinct.size());
        for (std::size_t i = vectors.size(); i-- > 0;) kept[d.assignment[i]] = labels[i];
        rows = std::move(d.distinct);
        labels = std::move(kept);
    }
    const std::size_t n = rows.size();
    std::vector<double> entries(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const auto d = static_cast<double>(hamming(rows[i], rows[j]));
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    return DistanceMatrix(n, std::move(entries), std::move(labels));
}

DistanceMatrix euclidean_matrix(const std::vector<Eigen::VectorXd>& points, std::vector<std::string> labels) {
    if (points.empty()) throw Error(ErrorKind::usage, "distance matrix of an empty point set");
    const std::size_t n = points.size();
    std::vector<double> entries(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (points[i].size() != points[0].size()) throw Error(ErrorKind::dimension_mismatch, "points of mixed dimension");
        for (std::size_t j = 0; j < i; ++j) {
            const double d = (points[i] - points[j]).norm();
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    return DistanceMatrix(n, std::move(entries), std::move(labels));
}

DistanceMatrix combine(const DistanceMatrix& first, const DistanceMatrix& second, CombineOp op) {
    if (first.size() != second.size()) {
        throw Error(ErrorKind::dimension_mismatch, "cannot combine matrices of size " + std::to_string(first.size()) +
                                                       " and " + std::to_string(second.size()));
    }
    if (first.labels() != second.labels()) throw Error(ErrorKind::dimension_mismatch, "matrix labels are not aligned");
    std::vector<double> entries(first.entries().size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const double a = first.entries()[k];
        const double b = second.entries()[k];
        entries[k] = op == CombineOp::min ? std::min(a, b) : std::max(a, b);
    }
    return DistanceMatrix(first.size(), std::move(entries), first.labels());
}

}  // namespace relutope
