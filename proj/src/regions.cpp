#include "relutope/regions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "relutope/error.hpp"

namespace relutope {

namespace {

constexpr double kConstantRow = 1e-13;

void check_bits(const NetworkSpec& net, const BitVector& bits) {
    if (bits.size() != net.hidden_count()) {
        throw Error(ErrorKind::dimension_mismatch, "bit vector has length " + std::to_string(bits.size()) +
                                                       ", network has " + std::to_string(net.hidden_count()) +
                                                       " hidden nodes");
    }
}

InequalitySystem stack(const InequalitySystem& top, const InequalitySystem& bottom) {
    InequalitySystem out;
    out.a.resize(top.a.rows() + bottom.a.rows(), top.a.cols());
    out.a << top.a, bottom.a;
    out.c.resize(top.c.size() + bottom.c.size());
    out.c << top.c, bottom.c;
    return out;
}

// Masks the affine form (lin, off) of a layer's pre-activations by its bits.
void apply_mask(Eigen::MatrixXd& lin, Eigen::VectorXd& off, const BitVector& bits, std::size_t first) {
    for (Eigen::Index j = 0; j < lin.rows(); ++j) {
        if (!bits.test(first + static_cast<std::size_t>(j))) {
            lin.row(j).setZero();
            off(j) = 0.0;
        }
    }
}

EssentialSystem essentialize_feasible(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, const Tolerances& tol) {
    const Eigen::Index rows = a.rows();
    std::vector<bool> keep(static_cast<std::size_t>(rows), true);
    std::vector<double> norms(static_cast<std::size_t>(rows));
    for (Eigen::Index i = 0; i < rows; ++i) {
        norms[i] = a.row(i).norm();
        if (norms[i] <= kConstantRow) {
            keep[i] = false;  // 0 <= c_i holds everywhere on a feasible system
            continue;
        }
        for (Eigen::Index k = 0; k < i; ++k) {
            if (!keep[k]) continue;
            const double scale = std::max(1.0, std::abs(c(i) / norms[i]));
            if ((a.row(i) / norms[i] - a.row(k) / norms[k]).cwiseAbs().maxCoeff() <= 1e-12 &&
                std::abs(c(i) / norms[i] - c(k) / norms[k]) <= 1e-12 * scale) {
                keep[i] = false;
                break;
            }
        }
    }

    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!keep[i]) continue;
        std::vector<Eigen::Index> current;
        Eigen::Index position = -1;
        for (Eigen::Index k = 0; k < rows; ++k) {
            if (!keep[k]) continue;
            if (k == i) position = static_cast<Eigen::Index>(current.size());
            current.push_back(k);
        }
        Eigen::MatrixXd sub(static_cast<Eigen::Index>(current.size()), a.cols());
        Eigen::VectorXd sub_c(static_cast<Eigen::Index>(current.size()));
        for (std::size_t k = 0; k < current.size(); ++k) {
            sub.row(static_cast<Eigen::Index>(k)) = a.row(current[k]);
            sub_c(static_cast<Eigen::Index>(k)) = c(current[k]);
        }
        if (is_redundant(sub, sub_c, position, tol.lp)) keep[i] = false;
    }

    EssentialSystem out;
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (keep[i]) out.active_rows.push_back(static_cast<std::size_t>(i));
    }
    out.a.resize(static_cast<Eigen::Index>(out.active_rows.size()), a.cols());
    out.c.resize(static_cast<Eigen::Index>(out.active_rows.size()));
    for (std::size_t k = 0; k < out.active_rows.size(); ++k) {
        out.a.row(static_cast<Eigen::Index>(k)) = a.row(static_cast<Eigen::Index>(out.active_rows[k]));
        out.c(static_cast<Eigen::Index>(k)) = c(static_cast<Eigen::Index>(out.active_rows[k]));
    }
    return out;
}

}  // namespace

void BoxRegion::validate(std::size_t dim) const {
    if (static_cast<std::size_t>(lower.size()) != dim || static_cast<std::size_t>(upper.size()) != dim) {
        throw Error(ErrorKind::dimension_mismatch, "box bounds must have length " + std::to_string(dim));
    }
    for (Eigen::Index j = 0; j < lower.size(); ++j) {
        if (!std::isfinite(lower(j)) || !std::isfinite(upper(j))) {
            throw Error(ErrorKind::non_finite, "box bounds must be finite");
        }
        if (!(lower(j) < upper(j))) {
            throw Error(ErrorKind::usage, "box lower bound must be below the upper bound in coordinate " +
                                              std::to_string(j));
        }
    }
}

bool BoxRegion::contains(const Eigen::VectorXd& x) const {
    return x.size() == lower.size() && (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

InequalitySystem BoxRegion::constraints() const {
    const Eigen::Index m = lower.size();
    InequalitySystem out{Eigen::MatrixXd::Zero(2 * m, m), Eigen::VectorXd(2 * m)};
    for (Eigen::Index j = 0; j < m; ++j) {
        out.a(2 * j, j) = 1.0;
        out.c(2 * j) = upper(j);
        out.a(2 * j + 1, j) = -1.0;
        out.c(2 * j + 1) = -lower(j);
    }
    return out;
}

InequalitySystem preactivation_forms(const NetworkSpec& net, const BitVector& bits) {
    check_bits(net, bits);
    const auto m = static_cast<Eigen::Index>(net.input_dim());
    InequalitySystem forms{Eigen::MatrixXd(static_cast<Eigen::Index>(net.hidden_count()), m),
                           Eigen::VectorXd(static_cast<Eigen::Index>(net.hidden_count()))};
    // Composed map of the previous layer's masked output: W_hat, b_hat after diag(s).
    Eigen::MatrixXd lin = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd off = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 0; i < net.hidden_layer_count(); ++i) {
        const Layer& layer = net.hidden_layer(i);
        Eigen::MatrixXd w_hat = layer.weights * lin;
        Eigen::VectorXd b_hat = layer.weights * off + layer.bias;
        const auto first = static_cast<Eigen::Index>(net.hidden_offset(i));
        forms.a.middleRows(first, w_hat.rows()) = w_hat;
        forms.c.segment(first, b_hat.size()) = b_hat;
        apply_mask(w_hat, b_hat, bits, net.hidden_offset(i));
        lin = std::move(w_hat);
        off = std::move(b_hat);
    }
    return forms;
}

InequalitySystem assemble(const NetworkSpec& net, const BitVector& bits) {
    InequalitySystem sys = preactivation_forms(net, bits);
    // Active nodes (bit 1) require W_hat x + b_hat >= 0, inactive ones <= 0.
    for (Eigen::Index j = 0; j < sys.a.rows(); ++j) {
        const double sign = bits.test(static_cast<std::size_t>(j)) ? -1.0 : 1.0;
        sys.a.row(j) *= sign;
        sys.c(j) *= -sign;
    }
    return sys;
}

EssentialSystem essentialize(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, const Tolerances& tol) {
    const auto ball = chebyshev_ball(a, c, tol.lp);
    if (!ball) throw Error(ErrorKind::infeasible, "cannot essentialize an empty polyhedron");
    if (ball->radius <= tol.dim) {
        throw Error(ErrorKind::degenerate, "cannot essentialize a polyhedron that is not full-dimensional");
    }
    return essentialize_feasible(a, c, tol);
}

AffineMap affine_map(const NetworkSpec& net, const BitVector& bits) {
    check_bits(net, bits);
    const auto m = static_cast<Eigen::Index>(net.input_dim());
    Eigen::MatrixXd lin = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd off = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 0; i < net.hidden_layer_count(); ++i) {
        const Layer& layer = net.hidden_layer(i);
        Eigen::MatrixXd w_hat = layer.weights * lin;
        Eigen::VectorXd b_hat = layer.weights * off + layer.bias;
        apply_mask(w_hat, b_hat, bits, net.hidden_offset(i));
        lin = std::move(w_hat);
        off = std::move(b_hat);
    }
    const Layer& out = net.output_layer();
    return AffineMap{out.weights * lin, out.weights * off + out.bias};
}

std::optional<Region> try_region(const NetworkSpec& net, const BitVector& bits, const std::optional<BoxRegion>& box,
                                 const Tolerances& tol) {
    const InequalitySystem forms = preactivation_forms(net, bits);
    // A node whose pre-activation is constant on this region must agree with its bit
    // under the strict rule; the closed LP system alone cannot see that.
    for (Eigen::Index j = 0; j < forms.a.rows(); ++j) {
        if (forms.a.row(j).cwiseAbs().maxCoeff() > kConstantRow) continue;
        if (bits.test(static_cast<std::size_t>(j)) != (forms.c(j) > tol.bit)) return std::nullopt;
    }

    Region region;
    region.bits = bits;
    region.system = assemble(net, bits);
    if (box) {
        box->validate(net.input_dim());
        region.system = stack(region.system, box->constraints());
    }
    const auto ball = chebyshev_ball(region.system.a, region.system.c, tol.lp);
    if (!ball || ball->radius <= tol.dim) return std::nullopt;
    region.interior_point = ball->center;
    region.inradius = ball->radius;
    region.essential = essentialize_feasible(region.system.a, region.system.c, tol);
    for (std::size_t row : region.essential.active_rows) {
        if (row < net.hidden_count()) {
            region.active_bits.push_back(row);
        } else {
            region.hits_boundary = true;
        }
    }
    region.affine = affine_map(net, bits);
    return region;
}

Region region_of(const NetworkSpec& net, const Eigen::VectorXd& x, const Tolerances& tol) {
    const ActivationPattern pattern = activation_pattern(net, x, tol.bit);
    auto region = try_region(net, pattern.bits, std::nullopt, tol);
    if (!region) {
        throw Error(ErrorKind::degenerate, "point " + pattern.bits.to_string() +
                                               " lies in a cell that is not full-dimensional");
    }
    region->on_boundary_point = pattern.min_abs_pre_activation <= tol.bit;
    return *std::move(region);
}

std::vector<BitVector> neighbors(const Region& region) {
    std::vector<BitVector> out;
    out.reserve(region.active_bits.size());
    for (std::size_t bit : region.active_bits) out.push_back(region.bits.flipped(bit));
    return out;
}

std::optional<FacetBall> shared_facet(const Region& first, const Region& second, std::size_t bit,
                                      const Tolerances& tol) {
    if (first.bits.size() != second.bits.size() || bit >= first.bits.size() ||
        first.bits.flipped(bit) != second.bits) {
        throw Error(ErrorKind::usage, "regions do not differ exactly in bit " + std::to_string(bit));
    }
    const auto k = static_cast<Eigen::Index>(bit);
    const Eigen::VectorXd normal_raw = first.system.a.row(k).transpose();
    const double norm = normal_raw.norm();
    if (norm <= kConstantRow) return std::nullopt;
    const Eigen::VectorXd unit = normal_raw / norm;
    const double level = first.system.c(k) / norm;

    const Eigen::Index m = first.system.a.cols();
    const Eigen::Index other = first.system.a.rows() + second.system.a.rows() - 2;
    LinearProgram lp;
    lp.objective = Eigen::VectorXd::Unit(m + 1, m);
    lp.constraints = Eigen::MatrixXd::Zero(other + 3, m + 1);
    lp.rhs = Eigen::VectorXd::Zero(other + 3);
    Eigen::Index row = 0;
    for (const Region* r : {&first, &second}) {
        for (Eigen::Index i = 0; i < r->system.a.rows(); ++i) {
            if (i == k) continue;
            const Eigen::VectorXd g = r->system.a.row(i).transpose();
            lp.constraints.row(row).head(m) = g.transpose();
            lp.constraints(row, m) = (g - g.dot(unit) * unit).norm();
            lp.rhs(row++) = r->system.c(i);
        }
    }
    lp.constraints.row(row).head(m) = unit.transpose();
    lp.rhs(row++) = level;
    lp.constraints.row(row).head(m) = -unit.transpose();
    lp.rhs(row++) = -level;
    lp.constraints(row, m) = -1.0;

    LpOutcome res = solve(lp, tol.lp);
    if (res.status == LpStatus::infeasible) return std::nullopt;
    double radius = 0.0;
    if (res.status == LpStatus::unbounded) {
        radius = std::numeric_limits<double>::infinity();
        Eigen::VectorXd upper = Eigen::VectorXd::Constant(m + 1, std::numeric_limits<double>::infinity());
        upper(m) = 1.0;
        lp.upper = upper;
        res = solve(lp, tol.lp);
        if (res.status != LpStatus::optimal) throw Error(ErrorKind::internal, "capped facet problem failed");
    } else {
        radius = std::max(0.0, res.witness(m));
    }
    return FacetBall{res.witness.head(m), unit, radius};
}

}  // namespace relutope
