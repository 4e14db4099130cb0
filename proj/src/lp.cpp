#include "relutope/lp.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "relutope/error.hpp"

namespace relutope {

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kZeroRowNorm = 1e-13;
constexpr double kPivotEps = 1e-10;
constexpr double kRatioTie = 1e-12;

// Tableau layout: rows 0..m-1 are constraints, row m holds reduced costs d_j
// (maximization: entering candidates have d_j > 0). The last column is the
// right-hand side; in the cost row it stores minus the current objective value.
class Simplex {
public:
    Simplex(Tableau tableau, std::vector<Eigen::Index> basis, std::size_t iteration_limit)
        : t_(std::move(tableau)), basis_(std::move(basis)), limit_(iteration_limit) {}

    Tableau& tableau() { return t_; }
    std::vector<Eigen::Index>& basis() { return basis_; }
    Eigen::Index rows() const { return t_.rows() - 1; }
    Eigen::Index rhs_col() const { return t_.cols() - 1; }

    void set_costs(const Eigen::VectorXd& cost) {
        const Eigen::Index m = rows();
        for (Eigen::Index j = 0; j < rhs_col(); ++j) t_(m, j) = cost(j);
        t_(m, rhs_col()) = 0.0;
        for (Eigen::Index r = 0; r < m; ++r) {
            const double cb = cost(basis_[r]);
            if (cb != 0.0) t_.row(m) -= cb * t_.row(r);
        }
    }

    // Runs Bland's rule over columns [0, allowed). Returns false when unbounded.
    bool optimize(Eigen::Index allowed, double cost_eps) {
        const Eigen::Index m = rows();
        const Eigen::Index rhs = rhs_col();
        for (;;) {
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < allowed; ++j) {
                if (t_(m, j) > cost_eps) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;

            Eigen::Index leave = -1;
            double best = 0.0;
            for (Eigen::Index r = 0; r < m; ++r) {
                const double coef = t_(r, enter);
                if (coef <= kPivotEps) continue;
                const double ratio = std::max(t_(r, rhs), 0.0) / coef;
                if (leave < 0 || ratio < best - kRatioTie) {
                    best = ratio;
                    leave = r;
                } else if (ratio <= best + kRatioTie && basis_[r] < basis_[leave]) {
                    leave = r;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }

    void pivot(Eigen::Index r, Eigen::Index j) {
        if (++iterations_ > limit_) {
            throw Error(ErrorKind::iteration_limit,
                        "simplex exceeded " + std::to_string(limit_) + " pivots without terminating");
        }
        t_.row(r) /= t_(r, j);
        for (Eigen::Index k = 0; k < t_.rows(); ++k) {
            if (k == r) continue;
            const double f = t_(k, j);
            if (f != 0.0) t_.row(k) -= f * t_.row(r);
        }
        basis_[r] = j;
    }

private:
    Tableau t_;
    std::vector<Eigen::Index> basis_;
    std::size_t limit_;
    std::size_t iterations_ = 0;
};

void check_dims(const Eigen::MatrixXd& a, const Eigen::VectorXd& c) {
    if (a.rows() != c.size()) {
        throw Error(ErrorKind::dimension_mismatch, "constraint matrix has " + std::to_string(a.rows()) +
                                                       " rows but right-hand side has " + std::to_string(c.size()));
    }
}

}  // namespace

LpOutcome solve(const LinearProgram& lp, double tau_lp) {
    check_dims(lp.constraints, lp.rhs);
    const Eigen::Index n = lp.objective.size();
    if (lp.constraints.cols() != n) {
        throw Error(ErrorKind::dimension_mismatch, "objective has length " + std::to_string(n) +
                                                       " but constraints have " +
                                                       std::to_string(lp.constraints.cols()) + " columns");
    }
    if ((lp.lower && lp.lower->size() != n) || (lp.upper && lp.upper->size() != n)) {
        throw Error(ErrorKind::dimension_mismatch, "variable bounds do not match the variable count");
    }

    // Stack the bound rows below the general rows; remember where each came from.
    const Eigen::Index base_rows = lp.constraints.rows();
    const Eigen::Index dual_len = base_rows + ((lp.lower || lp.upper) ? 2 * n : 0);
    std::vector<Eigen::VectorXd> row_vecs;
    std::vector<double> row_rhs;
    std::vector<Eigen::Index> row_origin;
    for (Eigen::Index i = 0; i < base_rows; ++i) {
        row_vecs.emplace_back(lp.constraints.row(i).transpose());
        row_rhs.push_back(lp.rhs(i));
        row_origin.push_back(i);
    }
    if (lp.lower || lp.upper) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (lp.upper && std::isfinite((*lp.upper)(j))) {
                row_vecs.push_back(Eigen::VectorXd::Unit(n, j));
                row_rhs.push_back((*lp.upper)(j));
                row_origin.push_back(base_rows + j);
            }
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            if (lp.lower && std::isfinite((*lp.lower)(j))) {
                row_vecs.push_back(-Eigen::VectorXd::Unit(n, j));
                row_rhs.push_back(-(*lp.lower)(j));
                row_origin.push_back(base_rows + n + j);
            }
        }
    }

    // Normalize rows; constant rows are decided immediately.
    std::vector<Eigen::Index> kept;
    std::vector<double> norms;
    for (std::size_t i = 0; i < row_vecs.size(); ++i) {
        const double norm = row_vecs[i].norm();
        if (norm <= kZeroRowNorm) {
            if (row_rhs[i] < -tau_lp) return LpOutcome{LpStatus::infeasible, 0.0, {}, {}};
            continue;
        }
        kept.push_back(static_cast<Eigen::Index>(i));
        norms.push_back(norm);
    }

    const auto m = static_cast<Eigen::Index>(kept.size());
    Eigen::Index artificial_count = 0;
    for (Eigen::Index r = 0; r < m; ++r) {
        if (row_rhs[kept[r]] / norms[r] < 0.0) ++artificial_count;
    }
    // Columns: x+ (n), x- (n), slacks (m), artificials.
    const Eigen::Index slack0 = 2 * n;
    const Eigen::Index art0 = slack0 + m;
    const Eigen::Index cols = art0 + artificial_count;
    Tableau t = Tableau::Zero(m + 1, cols + 1);
    std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
    Eigen::Index next_art = art0;
    for (Eigen::Index r = 0; r < m; ++r) {
        const Eigen::VectorXd a = row_vecs[kept[r]] / norms[r];
        double b = row_rhs[kept[r]] / norms[r];
        double sign = 1.0;
        if (b < 0.0) sign = -1.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            t(r, j) = sign * a(j);
            t(r, n + j) = -sign * a(j);
        }
        t(r, slack0 + r) = sign;
        t(r, cols) = sign * b;
        if (sign < 0.0) {
            t(r, next_art) = 1.0;
            basis[r] = next_art++;
        } else {
            basis[r] = slack0 + r;
        }
    }

    const std::size_t limit = 200 * static_cast<std::size_t>(m + cols) + 1000;
    Simplex simplex(std::move(t), std::move(basis), limit);

    if (artificial_count > 0) {
        Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
        phase1.tail(artificial_count).setConstant(-1.0);
        simplex.set_costs(phase1);
        simplex.optimize(cols, 1e-11);
        const double infeasibility = simplex.tableau()(m, cols);  // = sum of artificials
        if (infeasibility > tau_lp) return LpOutcome{LpStatus::infeasible, 0.0, {}, {}};
        // Drive zero-valued artificials out of the basis where a real column can replace them.
        for (Eigen::Index r = 0; r < m; ++r) {
            if (simplex.basis()[r] < art0) continue;
            for (Eigen::Index j = 0; j < art0; ++j) {
                if (std::abs(simplex.tableau()(r, j)) > 1e-9) {
                    simplex.pivot(r, j);
                    break;
                }
            }
        }
    }

    Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols);
    cost.head(n) = lp.objective;
    cost.segment(n, n) = -lp.objective;
    simplex.set_costs(cost);
    const double cost_eps = 1e-11 * std::max(1.0, lp.objective.cwiseAbs().maxCoeff());
    if (!simplex.optimize(art0, cost_eps)) return LpOutcome{LpStatus::unbounded, 0.0, {}, {}};

    LpOutcome out;
    out.status = LpStatus::optimal;
    Eigen::VectorXd split = Eigen::VectorXd::Zero(cols);
    const Tableau& tab = simplex.tableau();
    for (Eigen::Index r = 0; r < m; ++r) split(simplex.basis()[r]) = tab(r, cols);
    out.witness = split.head(n) - split.segment(n, n);
    out.optimal_value = lp.objective.dot(out.witness);
    out.duals = Eigen::VectorXd::Zero(dual_len);
    for (Eigen::Index r = 0; r < m; ++r) {
        const double y = std::max(0.0, -tab(m, slack0 + r));
        out.duals(row_origin[kept[r]]) += y / norms[r];
    }
    return out;
}

bool is_feasible(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, double tau_lp) {
    check_dims(a, c);
    LinearProgram lp{Eigen::VectorXd::Zero(a.cols()), a, c, std::nullopt, std::nullopt};
    return solve(lp, tau_lp).status != LpStatus::infeasible;
}

bool is_redundant(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, Eigen::Index row, double tau_lp) {
    check_dims(a, c);
    if (row < 0 || row >= a.rows()) {
        throw Error(ErrorKind::dimension_mismatch, "row index " + std::to_string(row) + " out of range");
    }
    const double norm = a.row(row).norm();
    if (norm <= kZeroRowNorm) return c(row) >= -tau_lp;

    Eigen::MatrixXd rest(a.rows() - 1, a.cols());
    Eigen::VectorXd rest_rhs(a.rows() - 1);
    for (Eigen::Index i = 0, k = 0; i < a.rows(); ++i) {
        if (i == row) continue;
        rest.row(k) = a.row(i);
        rest_rhs(k++) = c(i);
    }
    LinearProgram lp{a.row(row).transpose() / norm, std::move(rest), std::move(rest_rhs), std::nullopt, std::nullopt};
    const LpOutcome res = solve(lp, tau_lp);
    switch (res.status) {
        case LpStatus::unbounded: return false;
        case LpStatus::infeasible: throw Error(ErrorKind::infeasible, "redundancy test on an infeasible system");
        case LpStatus::optimal: break;
    }
    return res.optimal_value <= c(row) / norm + tau_lp;
}

std::optional<ChebyshevBall> chebyshev_ball(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, double tau_lp) {
    check_dims(a, c);
    const Eigen::Index n = a.cols();
    LinearProgram lp;
    lp.objective = Eigen::VectorXd::Unit(n + 1, n);
    lp.constraints.resize(a.rows() + 1, n + 1);
    lp.constraints.topLeftCorner(a.rows(), n) = a;
    lp.constraints.col(n).head(a.rows()) = a.rowwise().norm();
    lp.constraints.row(a.rows()).setZero();
    lp.constraints(a.rows(), n) = -1.0;
    lp.rhs.resize(a.rows() + 1);
    lp.rhs.head(a.rows()) = c;
    lp.rhs(a.rows()) = 0.0;

    LpOutcome res = solve(lp, tau_lp);
    if (res.status == LpStatus::infeasible) return std::nullopt;
    double radius = 0.0;
    if (res.status == LpStatus::unbounded) {
        // Cap the radius only to recover a center.
        radius = std::numeric_limits<double>::infinity();
        Eigen::VectorXd upper = Eigen::VectorXd::Constant(n + 1, std::numeric_limits<double>::infinity());
        upper(n) = 1.0;
        lp.upper = upper;
        res = solve(lp, tau_lp);
        if (res.status != LpStatus::optimal) {
            throw Error(ErrorKind::internal, "capped Chebyshev problem did not reach an optimum");
        }
    } else {
        radius = std::max(0.0, res.witness(n));
    }
    return ChebyshevBall{res.witness.head(n), radius};
}

double chebyshev_radius(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, double tau_lp) {
    const auto ball = chebyshev_ball(a, c, tau_lp);
    if (!ball) throw Error(ErrorKind::infeasible, "Chebyshev radius of an empty polyhedron");
    return ball->radius;
}

}  // namespace relutope
