#include "relutope/network.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "json.hpp"

#include "relutope/error.hpp"

namespace relutope {

using nlohmann::json;

namespace {

void check_length(const NetworkSpec& net, const Eigen::VectorXd& x) {
    if (static_cast<std::size_t>(x.size()) != net.input_dim()) {
        throw Error(ErrorKind::dimension_mismatch, "input has length " + std::to_string(x.size()) +
                                                       ", network expects " + std::to_string(net.input_dim()));
    }
}

double read_number(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        // Textual NaN/Infinity are accepted only so they can be rejected with a precise message.
        const auto s = j.get<std::string>();
        if (s == "NaN" || s == "nan" || s == "Infinity" || s == "-Infinity" || s == "inf" || s == "-inf") {
            throw Error(ErrorKind::non_finite, "non-finite entry \"" + s + "\" in " + where);
        }
    }
    throw Error(ErrorKind::parse, "expected a number in " + where);
}

}  // namespace

NetworkSpec::NetworkSpec(std::vector<Layer> layers) : layers_(std::move(layers)) {
    if (layers_.size() < 2) {
        throw Error(ErrorKind::dimension_mismatch, "network needs at least one hidden layer and an output layer");
    }
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const Layer& layer = layers_[i];
        const std::string name = "layer " + std::to_string(i + 1);
        if (layer.weights.rows() == 0 || layer.weights.cols() == 0) {
            throw Error(ErrorKind::dimension_mismatch, name + " has an empty weight matrix");
        }
        if (layer.bias.size() != layer.weights.rows()) {
            throw Error(ErrorKind::dimension_mismatch, name + " bias has length " + std::to_string(layer.bias.size()) +
                                                           " but weights have " +
                                                           std::to_string(layer.weights.rows()) + " rows");
        }
        if (i > 0 && layer.weights.cols() != layers_[i - 1].weights.rows()) {
            throw Error(ErrorKind::dimension_mismatch,
                        name + " weights have " + std::to_string(layer.weights.cols()) + " columns but layer " +
                            std::to_string(i) + " outputs " + std::to_string(layers_[i - 1].weights.rows()));
        }
        if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
            throw Error(ErrorKind::non_finite, name + " contains a non-finite entry");
        }
    }
    offsets_.reserve(layers_.size() - 1);
    for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
        offsets_.push_back(hidden_count_);
        hidden_count_ += static_cast<std::size_t>(layers_[i].weights.rows());
    }
}

NetworkSpec load_network(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::parse, std::string("weight file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("input_dim") || !doc.contains("layers") || !doc["layers"].is_array()) {
        throw Error(ErrorKind::parse, "weight file needs \"input_dim\" and a \"layers\" array");
    }
    if (!doc["input_dim"].is_number_integer() || doc["input_dim"].get<long long>() <= 0) {
        throw Error(ErrorKind::parse, "\"input_dim\" must be a positive integer");
    }
    const auto input_dim = doc["input_dim"].get<long long>();

    std::vector<Layer> layers;
    long long prev = input_dim;
    for (std::size_t li = 0; li < doc["layers"].size(); ++li) {
        const json& jl = doc["layers"][li];
        const std::string name = "layer " + std::to_string(li + 1);
        if (!jl.is_object() || !jl.contains("weights") || !jl.contains("bias") || !jl["weights"].is_array() ||
            !jl["bias"].is_array()) {
            throw Error(ErrorKind::parse, name + " needs \"weights\" and \"bias\" arrays");
        }
        const json& jw = jl["weights"];
        const auto rows = static_cast<Eigen::Index>(jw.size());
        const auto cols = rows > 0 && jw[0].is_array() ? static_cast<Eigen::Index>(jw[0].size()) : 0;
        if (rows == 0 || cols == 0) throw Error(ErrorKind::dimension_mismatch, name + " has an empty weight matrix");
        if (cols != prev) {
            throw Error(ErrorKind::dimension_mismatch, name + " weights are " + std::to_string(rows) + "x" +
                                                           std::to_string(cols) + " but the previous layer outputs " +
                                                           std::to_string(prev));
        }
        Layer layer{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
        for (Eigen::Index r = 0; r < rows; ++r) {
            if (!jw[r].is_array() || static_cast<Eigen::Index>(jw[r].size()) != cols) {
                throw Error(ErrorKind::dimension_mismatch, name + " weight row " + std::to_string(r) +
                                                               " does not have " + std::to_string(cols) + " entries");
            }
            for (Eigen::Index c = 0; c < cols; ++c) layer.weights(r, c) = read_number(jw[r][c], name + " weights");
        }
        if (static_cast<Eigen::Index>(jl["bias"].size()) != rows) {
            throw Error(ErrorKind::dimension_mismatch, name + " bias has " + std::to_string(jl["bias"].size()) +
                                                           " entries, expected " + std::to_string(rows));
        }
        for (Eigen::Index r = 0; r < rows; ++r) layer.bias(r) = read_number(jl["bias"][r], name + " bias");
        prev = rows;
        layers.push_back(std::move(layer));
    }
    return NetworkSpec(std::move(layers));
}

NetworkSpec load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open weight file " + path);
    return load_network(in);
}

void save_network(const NetworkSpec& net, std::ostream& out) {
    json doc;
    doc["input_dim"] = net.input_dim();
    doc["layers"] = json::array();
    for (const Layer& layer : net.layers()) {
        json jl;
        jl["weights"] = json::array();
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) row.push_back(layer.weights(r, c));
            jl["weights"].push_back(row);
        }
        jl["bias"] = std::vector<double>(layer.bias.data(), layer.bias.data() + layer.bias.size());
        doc["layers"].push_back(jl);
    }
    out << doc.dump() << '\n';
}

ForwardResult forward(const NetworkSpec& net, const Eigen::VectorXd& x) {
    check_length(net, x);
    ForwardResult result;
    result.layer_outputs.reserve(net.hidden_layer_count() + 1);
    result.layer_outputs.push_back(x);
    for (std::size_t i = 0; i < net.hidden_layer_count(); ++i) {
        const Layer& layer = net.hidden_layer(i);
        Eigen::VectorXd z = layer.weights * result.layer_outputs.back() + layer.bias;
        result.layer_outputs.push_back(z.cwiseMax(0.0));
    }
    result.output = net.output_layer().weights * result.layer_outputs.back() + net.output_layer().bias;
    return result;
}

ActivationPattern activation_pattern(const NetworkSpec& net, const Eigen::VectorXd& x, double tau_bit) {
    check_length(net, x);
    ActivationPattern pattern;
    pattern.bits = BitVector(net.hidden_count());
    pattern.pre_activations.reserve(net.hidden_count());
    pattern.min_abs_pre_activation = std::numeric_limits<double>::infinity();

    Eigen::VectorXd current = x;
    std::size_t bit = 0;
    for (std::size_t i = 0; i < net.hidden_layer_count(); ++i) {
        const Layer& layer = net.hidden_layer(i);
        Eigen::VectorXd z = layer.weights * current + layer.bias;
        for (Eigen::Index j = 0; j < z.size(); ++j, ++bit) {
            pattern.pre_activations.push_back(z(j));
            pattern.min_abs_pre_activation = std::min(pattern.min_abs_pre_activation, std::abs(z(j)));
            if (z(j) > tau_bit) {
                pattern.bits.set(bit);
            } else {
                z(j) = 0.0;
            }
        }
        current = std::move(z);
    }
    return pattern;
}

BitVector bit_vector(const NetworkSpec& net, const Eigen::VectorXd& x, double tau_bit) {
    return activation_pattern(net, x, tau_bit).bits;
}

}  // namespace relutope
