#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "relutope/metric.hpp"

namespace relutope {

/// Vietoris–Rips filtration: every clique of at most max_dim + 2 vertices whose
/// diameter is <= t_max, ordered by (diameter, dimension, vertex tuple).
class Filtration {
public:
    std::size_t size() const noexcept { return values_.size(); }
    std::size_t vertex_count() const noexcept { return vertex_count_; }
    /// Homology is computed in dimensions 0..max_dim().
    int max_dim() const noexcept { return max_dim_; }

    int dim(std::size_t i) const { return dims_[i]; }
    double value(std::size_t i) const { return values_[i]; }
    std::vector<std::uint32_t> vertices(std::size_t i) const;

    /// Base-N encoding of the ascending vertex tuple; unique within a dimension.
    std::uint64_t key(std::size_t i) const { return keys_[i]; }

private:
    friend Filtration build_filtration(const DistanceMatrix&, int, std::optional<double>, std::size_t, unsigned);

    std::size_t vertex_count_ = 0;
    int max_dim_ = 0;
    std::vector<double> values_;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint8_t> dims_;
};

inline constexpr std::size_t kDefaultSimplexCap = 50'000'000;

/// t_max defaults to the largest finite entry. Throws Error(resource_cap) when
/// the simplex count would exceed `simplex_cap`.
Filtration build_filtration(const DistanceMatrix& d, int max_dim, std::optional<double> t_max = std::nullopt,
                            std::size_t simplex_cap = kDefaultSimplexCap, unsigned threads = 1);

struct Interval {
    double birth = 0.0;
    double death = std::numeric_limits<double>::infinity();

    bool is_finite() const noexcept { return death != std::numeric_limits<double>::infinity(); }
    double length() const noexcept { return death - birth; }
    friend bool operator==(const Interval&, const Interval&) = default;
    friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Half-open intervals [birth, death) per homology dimension, each list sorted.
struct Barcode {
    std::vector<std::vector<Interval>> dims;

    const std::vector<Interval>& operator[](std::size_t d) const { return dims.at(d); }
    /// Drops birth == death intervals.
    Barcode without_zero_length() const;
    friend bool operator==(const Barcode&, const Barcode&) = default;
};

/// Column reduction over the two-element field. Dimensions are reduced in
/// ascending order; rows of negative simplices are compressed out of the next
/// dimension, and the top dimension stops once every class below it has died.
Barcode compute_barcodes(const Filtration& filtration);

Barcode persistent_homology(const DistanceMatrix& d, int max_dim, std::optional<double> t_max = std::nullopt,
                            unsigned threads = 1);

/// Lower-triangular CSV: line i (i >= 1) lists D(i,0..i-1), shortest round-trip decimals.
void export_lower_distance(const DistanceMatrix& d, std::ostream& out);

/// Inverse of export_lower_distance; commas and/or blanks separate values, empty lines
/// are skipped. Errors name the offending line.
DistanceMatrix read_lower_distance(std::istream& in);

/// [{"dim": i, "bars": [[birth, death-or-null], ...]}, ...]
void write_barcode_json(const Barcode& barcode, std::ostream& out);
void write_barcode_table(const Barcode& barcode, std::ostream& out);

}  // namespace relutope
