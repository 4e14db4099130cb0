#pragma once

#include <Eigen/Dense>

#include <limits>
#include <optional>

namespace relutope {

/// Numerical thresholds shared by the LP-backed geometry code.
struct Tolerances {
    double lp = 1e-8;    // feasibility / optimality slack on unit-normalized rows
    double dim = 1e-7;   // Chebyshev radius above which a polyhedron counts as full-dimensional
    double bit = 1e-12;  // |pre-activation| at or below this is treated as zero
};

/// maximize objective . x  subject to  constraints * x <= rhs  (and optional box bounds on x).
struct LinearProgram {
    Eigen::VectorXd objective;
    Eigen::MatrixXd constraints;
    Eigen::VectorXd rhs;
    std::optional<Eigen::VectorXd> lower;
    std::optional<Eigen::VectorXd> upper;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpOutcome {
    LpStatus status = LpStatus::infeasible;
    double optimal_value = 0.0;
    Eigen::VectorXd witness;
    // Multipliers y >= 0 with constraints^T y = objective (box-bound rows appended
    // after the constraint rows, upper bounds first). Only set when optimal.
    Eigen::VectorXd duals;
};

/// Dense two-phase primal simplex with Bland's rule. Variables are free unless
/// bounded. Throws Error(iteration_limit) rather than returning a guess.
LpOutcome solve(const LinearProgram& lp, double tau_lp = 1e-8);

bool is_feasible(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, double tau_lp = 1e-8);

/// Row i is redundant when max a_i . x over the other rows stays within tau_lp
/// of c_i. An unbounded relaxation means the row constrains.
bool is_redundant(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, Eigen::Index row, double tau_lp = 1e-8);

struct ChebyshevBall {
    Eigen::VectorXd center;
    double radius = 0.0;  // +inf when the polyhedron contains arbitrarily large balls
};

/// Largest inscribed ball, or nullopt when {x : a x <= c} is empty.
std::optional<ChebyshevBall> chebyshev_ball(const Eigen::MatrixXd& a, const Eigen::VectorXd& c,
                                            double tau_lp = 1e-8);

/// Radius of the largest inscribed ball; throws Error(infeasible) on an empty set.
double chebyshev_radius(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, double tau_lp = 1e-8);

}  // namespace relutope
