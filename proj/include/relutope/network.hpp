#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

#include "relutope/bit_vector.hpp"

namespace relutope {

struct Layer {
    Eigen::MatrixXd weights;  // rows = nodes of this layer, cols = nodes of the previous layer
    Eigen::VectorXd bias;
};

/// A dense ReLU feed-forward network: hidden layers apply ReLU, the last
/// layer is affine only. Immutable once constructed.
class NetworkSpec {
public:
    /// Validates the dimension chain and finiteness of every entry.
    explicit NetworkSpec(std::vector<Layer> layers);

    const std::vector<Layer>& layers() const noexcept { return layers_; }
    std::size_t hidden_layer_count() const noexcept { return layers_.size() - 1; }
    const Layer& hidden_layer(std::size_t i) const { return layers_[i]; }
    const Layer& output_layer() const { return layers_.back(); }

    std::size_t input_dim() const noexcept { return static_cast<std::size_t>(layers_.front().weights.cols()); }
    std::size_t output_dim() const noexcept { return static_cast<std::size_t>(layers_.back().weights.rows()); }
    /// Total number of hidden nodes, i.e. the bit-vector length.
    std::size_t hidden_count() const noexcept { return hidden_count_; }
    /// Offset of hidden layer i inside the stacked bit vector.
    std::size_t hidden_offset(std::size_t i) const { return offsets_[i]; }

private:
    std::vector<Layer> layers_;
    std::vector<std::size_t> offsets_;
    std::size_t hidden_count_ = 0;
};

/// Reads the JSON weight file: {"input_dim": m, "layers": [{"weights": [[...]], "bias": [...]}, ...]}.
NetworkSpec load_network(std::istream& in);
NetworkSpec load_network_file(const std::string& path);
void save_network(const NetworkSpec& net, std::ostream& out);

struct ForwardResult {
    std::vector<Eigen::VectorXd> layer_outputs;  // F_0 = x, then each hidden layer after ReLU
    Eigen::VectorXd output;
};

ForwardResult forward(const NetworkSpec& net, const Eigen::VectorXd& x);

struct ActivationPattern {
    BitVector bits;
    std::vector<double> pre_activations;  // layer-major, same order as bits
    double min_abs_pre_activation = 0.0;
};

/// Pre-activations at or below tau count as inactive; tau = 0 is the exact rule.
ActivationPattern activation_pattern(const NetworkSpec& net, const Eigen::VectorXd& x, double tau_bit = 1e-12);

BitVector bit_vector(const NetworkSpec& net, const Eigen::VectorXd& x, double tau_bit = 1e-12);

}  // namespace relutope
