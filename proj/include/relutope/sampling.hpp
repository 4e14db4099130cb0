#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <vector>

#include "relutope/regions.hpp"

namespace relutope {

/// Anchor vectors spanning sampled loops. The anchor at offset_index (if any) is
/// an additive center; the remaining anchors, in order, are the plane anchors.
struct AnchorFamily {
    std::vector<Eigen::VectorXd> anchors;
    double alpha = 1.0;
    std::optional<std::size_t> offset_index;

    /// Needs at least `plane_anchors` non-offset anchors, all of one length.
    void validate(std::size_t plane_anchors, bool require_orthogonal = false) const;
    std::vector<Eigen::VectorXd> plane_anchors() const;
    Eigen::VectorXd offset() const;
};

/// offset + alpha (sin t A1 + cos t A2) at t_k = t0 + k (t1 - t0) / count, k < count.
std::vector<Eigen::VectorXd> circle_samples(const AnchorFamily& family, std::size_t count, double theta0 = 0.0,
                                            double theta1 = 2.0 * std::numbers::pi);

/// offset + alpha (sin t1 A1 + cos t1 A2 + sin t2 A3 + cos t2 A4) on an n1 x n2 grid
/// of [0, 2pi)^2, t1 varying slowest.
std::vector<Eigen::VectorXd> torus_samples(const AnchorFamily& family, std::size_t n1, std::size_t n2);

/// Same formula with (t1, t2) drawn uniformly from [0, 2pi)^2.
std::vector<Eigen::VectorXd> torus_samples_uniform(const AnchorFamily& family, std::size_t count,
                                                   std::uint64_t seed);

/// Gram–Schmidt on seeded Gaussian draws; count unit vectors, pairwise orthogonal.
std::vector<Eigen::VectorXd> random_orthogonal_anchors(std::size_t dim, std::size_t count, std::uint64_t seed);

std::vector<Eigen::VectorXd> uniform_box_samples(const BoxRegion& box, std::size_t count, std::uint64_t seed);

/// {"points": [[...], ...]}
std::vector<Eigen::VectorXd> read_points(std::istream& in);
std::vector<Eigen::VectorXd> read_points_file(const std::string& path);
void write_points(const std::vector<Eigen::VectorXd>& points, std::ostream& out);

}  // namespace relutope
