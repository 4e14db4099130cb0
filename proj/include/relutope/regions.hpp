#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "relutope/bit_vector.hpp"
#include "relutope/lp.hpp"
#include "relutope/network.hpp"

namespace relutope {

/// {x : a x <= c}
struct InequalitySystem {
    Eigen::MatrixXd a;
    Eigen::VectorXd c;
};

struct EssentialSystem {
    Eigen::MatrixXd a;
    Eigen::VectorXd c;
    std::vector<std::size_t> active_rows;  // ascending indices into the input system
};

/// x -> matrix * x + offset
struct AffineMap {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd offset;

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return matrix * x + offset; }
};

/// Axis-aligned box lower <= x <= upper.
struct BoxRegion {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    void validate(std::size_t dim) const;
    bool contains(const Eigen::VectorXd& x) const;
    /// Rows x_j <= upper_j, -x_j <= -lower_j for j = 0..m-1.
    InequalitySystem constraints() const;
};

struct Region {
    BitVector bits;
    InequalitySystem system;    // one row per hidden node, then box rows in bounded mode
    EssentialSystem essential;
    std::vector<std::size_t> active_bits;
    AffineMap affine;
    Eigen::VectorXd interior_point;  // Chebyshev center
    double inradius = 0.0;
    bool hits_boundary = false;      // some box face is a facet (bounded mode)
    bool on_boundary_point = false;  // region_of: the query point had a pre-activation within tau_bit of 0
};

/// Pre-activation of every hidden node as an affine function of the input,
/// valid on the closure of the region labelled by bits.
InequalitySystem preactivation_forms(const NetworkSpec& net, const BitVector& bits);

InequalitySystem assemble(const NetworkSpec& net, const BitVector& bits);

/// Removes redundant rows in ascending index order. Exact duplicates of an
/// earlier row are dropped before any LP is solved.
EssentialSystem essentialize(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, const Tolerances& tol = {});

AffineMap affine_map(const NetworkSpec& net, const BitVector& bits);

/// Builds the region for a bit vector, or nullopt when its polyhedron (intersected
/// with the box, if any) is empty or not full-dimensional.
std::optional<Region> try_region(const NetworkSpec& net, const BitVector& bits, const std::optional<BoxRegion>& box,
                                 const Tolerances& tol = {});

Region region_of(const NetworkSpec& net, const Eigen::VectorXd& x, const Tolerances& tol = {});

/// One bit vector per active bit, each differing from region.bits in that bit only.
std::vector<BitVector> neighbors(const Region& region);

/// Inscribed ball of P1 ∩ P2 inside the hyperplane of `bit`, measured within that hyperplane.
struct FacetBall {
    Eigen::VectorXd center;
    Eigen::VectorXd normal;  // unit normal of the shared hyperplane
    double radius = 0.0;
};

std::optional<FacetBall> shared_facet(const Region& first, const Region& second, std::size_t bit,
                                      const Tolerances& tol = {});

}  // namespace relutope
