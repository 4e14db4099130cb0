#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relutope/bit_vector.hpp"
#include "relutope/network.hpp"
#include "relutope/regions.hpp"

namespace relutope {

struct EnumerateOptions {
    Tolerances tol;
    std::size_t max_brute_bits = 24;
    unsigned threads = 1;
    std::uint64_t seed = 0;  // redraws of a seed point that sits on a boundary
};

/// All full-dimensional regions of the decomposition (optionally restricted to a
/// box) with their facet adjacency. Regions are kept sorted by bit vector.
class DecompositionAtlas {
public:
    DecompositionAtlas() = default;
    DecompositionAtlas(std::vector<Region> regions, std::vector<std::pair<BitVector, BitVector>> edges,
                       std::optional<BoxRegion> box);

    const std::vector<Region>& regions() const noexcept { return regions_; }
    /// Index pairs (i < j) into regions(), sorted.
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }
    const std::optional<BoxRegion>& box() const noexcept { return box_; }

    std::optional<std::size_t> find(const BitVector& bits) const;
    std::size_t size() const noexcept { return regions_.size(); }

private:
    std::vector<Region> regions_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::optional<BoxRegion> box_;
    std::unordered_map<BitVector, std::size_t, BitVectorHash> index_;
};

/// Tests every one of the 2^h bit vectors. Throws Error(resource_cap) when h
/// exceeds options.max_brute_bits.
DecompositionAtlas enumerate_brute(const NetworkSpec& net, const std::optional<BoxRegion>& box,
                                   const EnumerateOptions& options = {});

/// Breadth-first traversal from the seed's region, flipping active bits. Covers
/// the connected component of the seed (all of R^m when unbounded).
DecompositionAtlas enumerate_traverse(const NetworkSpec& net, const Eigen::VectorXd& seed,
                                      const std::optional<BoxRegion>& box, const EnumerateOptions& options = {});

struct DualGraph {
    std::size_t vertex_count = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<int> color;  // popcount parity of each region's bit vector
    std::size_t even_count = 0;
    std::size_t odd_count = 0;
};

/// Throws Error(internal) if an edge joins two regions of equal parity.
DualGraph dual_graph(const DecompositionAtlas& atlas);

/// JSON lines {"bits", "active_bits", "boundary_flag"} and "bits bits" edge lines.
void write_atlas(const DecompositionAtlas& atlas, std::ostream& regions_out, std::ostream& edges_out);

}  // namespace relutope
