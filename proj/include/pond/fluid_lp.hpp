#pragma once

#include <optional>
#include <vector>

#include "pond/grid.hpp"
#include "pond/instance.hpp"

namespace pond {

// Mean-level problem data: max sum r*x  s.t.  sum_j x_ij = lambda_i, x >= 0,
// sum_i w^(k)_ij x_ij + epsilon <= rho^(k)_j.
struct FluidProblem {
    std::vector<double> lambda;            // N
    Grid<double> r;                        // N x M
    std::vector<Grid<double>> w;           // K matrices, N x M
    std::vector<std::vector<double>> rho;  // K vectors, M
    double epsilon = 0.0;

    std::size_t n_types() const { return lambda.size(); }
    std::size_t n_servers() const { return r.cols(); }
    std::size_t n_constraints() const { return w.size(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Grid<double> x_star;  // N x M, valid when Optimal
    double objective = 0.0;
};

// Exact optimum via two-phase dense simplex with Bland's rule. The returned
// solution is re-checked against all constraints; a violation beyond 1e-9 is
// an internal error, as is an Unbounded status.
LpSolution solve_fluid_lp(const FluidProblem& problem);

struct SlaterResult {
    LpStatus status = LpStatus::Infeasible;
    double delta = 0.0;  // largest uniform slack; 0 means feasible, no interior
    Grid<double> x;      // an interior witness when Optimal
};

// Largest delta with sum_i w^(k)_ij x_ij - rho^(k)_j <= -delta for all (j,k).
// The problem's epsilon field is ignored.
SlaterResult slater_margin(const FluidProblem& problem);

struct TheoremParams {
    double epsilon = 0.0;
    double v = 0.0;
    double b = 0.0;
    double gamma = 0.0;
    double nu_max = 0.0;
    double delta = 0.0;
    bool precondition_ok = true;       // delta >= 4 * epsilon at this horizon
    double epsilon_residual = 0.0;     // |eps_final - eps_first_pass| / eps_final
};

TheoremParams theorem_params(const FluidProblem& problem, long horizon, double c_lambda,
                             double c_u);

struct GapCheck {
    double epsilon = 0.0;
    bool feasible = false;
    double gap = 0.0;    // objective(0) - objective(epsilon)
    double bound = 0.0;  // (epsilon/delta) * sum_i lambda_i
    bool holds = false;
};

// Verifies the per-slot optimality-gap bound of the tightened problem on a
// grid of epsilon values, each required to be below the Slater margin.
std::vector<GapCheck> tightness_gap_bound_check(const FluidProblem& problem,
                                                const std::vector<double>& epsilon_grid);

// Mean-level problem from instance data (fairness requirements use the mean
// total arrival rate).
FluidProblem fluid_from_instance(const Instance& inst, double epsilon = 0.0);

namespace simplex {

// max c.x  s.t.  a_eq x = b_eq, a_ub x <= b_ub, x >= 0
struct Result {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

Result maximize(const std::vector<double>& c, const Grid<double>& a_eq,
                const std::vector<double>& b_eq, const Grid<double>& a_ub,
                const std::vector<double>& b_ub);

}  // namespace simplex

}  // namespace pond
