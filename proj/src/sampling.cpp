#include "relutope/sampling.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "json.hpp"
#include "relutope/error.hpp"

namespace relutope {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::VectorXd torus_point(const std::vector<Eigen::VectorXd>& plane, const Eigen::VectorXd& offset, double alpha,
                            double t1, double t2) {
    return offset + alpha * (std::sin(t1) * plane[0] + std::cos(t1) * plane[1] + std::sin(t2) * plane[2] +
                             std::cos(t2) * plane[3]);
}

}  // namespace

void AnchorFamily::validate(std::size_t plane_needed, bool require_orthogonal) const {
    if (anchors.empty()) throw Error(ErrorKind::usage, "anchor family is empty");
    if (offset_index && *offset_index >= anchors.size()) {
        throw Error(ErrorKind::usage, "offset index " + std::to_string(*offset_index) + " is out of range");
    }
    const std::size_t plane = anchors.size() - (offset_index ? 1 : 0);
    if (plane < plane_needed) {
        throw Error(ErrorKind::usage, "need " + std::to_string(plane_needed) + " plane anchors, have " +
                                          std::to_string(plane));
    }
    for (const auto& a : anchors) {
        if (a.size() != anchors.front().size() || a.size() == 0) {
            throw Error(ErrorKind::dimension_mismatch, "anchors must share one non-zero length");
        }
        if (!a.allFinite()) throw Error(ErrorKind::non_finite, "anchor contains a non-finite entry");
    }
    if (require_orthogonal) {
        for (std::size_t i = 0; i < anchors.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (std::abs(anchors[i].dot(anchors[j])) > 1e-6 * anchors[i].norm() * anchors[j].norm()) {
                    throw Error(ErrorKind::usage, "anchors " + std::to_string(j) + " and " + std::to_string(i) +
                                                      " are not orthogonal");
                }
            }
        }
    }
}

std::vector<Eigen::VectorXd> AnchorFamily::plane_anchors() const {
    std::vector<Eigen::VectorXd> out;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        if (!offset_index || *offset_index != i) out.push_back(anchors[i]);
    }
    return out;
}

Eigen::VectorXd AnchorFamily::offset() const {
    if (offset_index) return anchors[*offset_index];
    return Eigen::VectorXd::Zero(anchors.front().size());
}

std::vector<Eigen::VectorXd> circle_samples(const AnchorFamily& family, std::size_t count, double theta0,
                                            double theta1) {
    family.validate(2);
    if (count == 0) throw Error(ErrorKind::usage, "sample count must be positive");
    const auto plane = family.plane_anchors();
    const Eigen::VectorXd center = family.offset();
    std::vector<Eigen::VectorXd> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = theta0 + static_cast<double>(k) * (theta1 - theta0) / static_cast<double>(count);
        out.push_back(center + family.alpha * (std::sin(t) * plane[0] + std::cos(t) * plane[1]));
    }
    return out;
}

std::vector<Eigen::VectorXd> torus_samples(const AnchorFamily& family, std::size_t n1, std::size_t n2) {
    family.validate(4);
    if (n1 == 0 || n2 == 0) throw Error(ErrorKind::usage, "torus grid must be non-empty");
    const auto plane = family.plane_anchors();
    const Eigen::VectorXd center = family.offset();
    std::vector<Eigen::VectorXd> out;
    out.reserve(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i) {
        const double t1 = kTwoPi * static_cast<double>(i) / static_cast<double>(n1);
        for (std::size_t j = 0; j < n2; ++j) {
            const double t2 = kTwoPi * static_cast<double>(j) / static_cast<double>(n2);
            out.push_back(torus_point(plane, center, family.alpha, t1, t2));
        }
    }
    return out;
}

std::vector<Eigen::VectorXd> torus_samples_uniform(const AnchorFamily& family, std::size_t count,
                                                   std::uint64_t seed) {
    family.validate(4);
    const auto plane = family.plane_anchors();
    const Eigen::VectorXd center = family.offset();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::vector<Eigen::VectorXd> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double t1 = angle(rng);
        const double t2 = angle(rng);
        out.push_back(torus_point(plane, center, family.alpha, t1, t2));
    }
    return out;
}

std::vector<Eigen::VectorXd> random_orthogonal_anchors(std::size_t dim, std::size_t count, std::uint64_t seed) {
    if (count > dim) {
        throw Error(ErrorKind::usage, "cannot draw " + std::to_string(count) + " orthogonal vectors in dimension " +
                                          std::to_string(dim));
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Eigen::VectorXd> out;
    out.reserve(count);
    while (out.size() < count) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
        const double drawn = v.norm();
        // Two passes of modified Gram–Schmidt.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : out) v -= q.dot(v) * q;
        }
        const double norm = v.norm();
        if (norm <= 1e-8 * drawn) continue;
        out.push_back(v / norm);
    }
    return out;
}

std::vector<Eigen::VectorXd> uniform_box_samples(const BoxRegion& box, std::size_t count, std::uint64_t seed) {
    box.validate(static_cast<std::size_t>(box.lower.size()));
    std::mt19937_64 rng(seed);
    std::vector<Eigen::VectorXd> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Eigen::VectorXd x(box.lower.size());
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            x(j) = std::uniform_real_distribution<double>(box.lower(j), box.upper(j))(rng);
        }
        out.push_back(std::move(x));
    }
    return out;
}

std::vector<Eigen::VectorXd> read_points(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::parse, std::string("points file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array()) {
        throw Error(ErrorKind::parse, "points file needs a \"points\" array");
    }
    std::vector<Eigen::VectorXd> out;
    for (std::size_t i = 0; i < doc["points"].size(); ++i) {
        const auto& jp = doc["points"][i];
        if (!jp.is_array()) throw Error(ErrorKind::parse, "point " + std::to_string(i) + " is not an array");
        Eigen::VectorXd p(static_cast<Eigen::Index>(jp.size()));
        for (std::size_t j = 0; j < jp.size(); ++j) {
            if (!jp[j].is_number()) {
                throw Error(ErrorKind::parse, "point " + std::to_string(i) + " has a non-numeric coordinate");
            }
            p(static_cast<Eigen::Index>(j)) = jp[j].get<double>();
        }
        if (!out.empty() && p.size() != out.front().size()) {
            throw Error(ErrorKind::dimension_mismatch, "point " + std::to_string(i) + " has a different dimension");
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Eigen::VectorXd> read_points_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open points file " + path);
    return read_points(in);
}

void write_points(const std::vector<Eigen::VectorXd>& points, std::ostream& out) {
    nlohmann::json doc;
    doc["points"] = nlohmann::json::array();
    for (const auto& p : points) doc["points"].push_back(std::vector<double>(p.data(), p.data() + p.size()));
    out << doc.dump() << '\n';
    if (!out) throw Error(ErrorKind::io, "failed to write points");
}

}  // namespace relutope
