#include "pond/fluid_lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pond {

namespace simplex {

namespace {

constexpr double kTol = 1e-9;

// Dense tableau: rows are constraints, `top` holds z_j - c_j entries and the
// current objective in its last slot.
struct Tableau {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;  // variables, excluding rhs
    std::vector<std::vector<double>> rows;
    std::vector<double> top;
    std::vector<std::size_t> basis;

    double& rhs(std::size_t r) { return rows[r][n_cols]; }

    void pivot(std::size_t pr, std::size_t pc) {
        double p = rows[pr][pc];
        for (double& v : rows[pr]) v /= p;
        for (std::size_t r = 0; r < n_rows; ++r) {
            if (r == pr) continue;
            double f = rows[r][pc];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= n_cols; ++c) rows[r][c] -= f * rows[pr][c];
        }
        double f = top[pc];
        if (f != 0.0)
            for (std::size_t c = 0; c <= n_cols; ++c) top[c] -= f * rows[pr][c];
        basis[pr] = pc;
    }

    // Bland's rule: smallest eligible entering column, leaving row by min
    // ratio with smallest basis index on ties.
    LpStatus run(const std::vector<bool>& allowed) {
        for (;;) {
            std::size_t enter = n_cols;
            for (std::size_t c = 0; c < n_cols; ++c)
                if (allowed[c] && top[c] < -kTol) { enter = c; break; }
            if (enter == n_cols) return LpStatus::Optimal;

            std::size_t leave = n_rows;
            double best = 0.0;
            for (std::size_t r = 0; r < n_rows; ++r) {
                double a = rows[r][enter];
                if (a <= kTol) continue;
                double ratio = rhs(r) / a;
                if (leave == n_rows || ratio < best - kTol ||
                    (std::abs(ratio - best) <= kTol && basis[r] < basis[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == n_rows) return LpStatus::Unbounded;
            pivot(leave, enter);
        }
    }
};

}  // namespace

Result maximize(const std::vector<double>& c, const Grid<double>& a_eq,
                const std::vector<double>& b_eq, const Grid<double>& a_ub,
                const std::vector<double>& b_ub) {
    const std::size_t n = c.size();
    const std::size_t meq = b_eq.size();
    const std::size_t mub = b_ub.size();
    const std::size_t m = meq + mub;
    if ((meq && a_eq.cols() != n) || (mub && a_ub.cols() != n) || a_eq.rows() != meq ||
        a_ub.rows() != mub)
        throw std::invalid_argument("simplex: shape mismatch");

    // columns: [x (n)] [slack (mub)] [artificial (m)]
    const std::size_t slack0 = n;
    const std::size_t art0 = n + mub;
    const std::size_t n_cols = n + mub + m;

    Tableau t;
    t.n_rows = m;
    t.n_cols = n_cols;
    t.rows.assign(m, std::vector<double>(n_cols + 1, 0.0));
    t.basis.assign(m, 0);

    for (std::size_t r = 0; r < meq; ++r) {
        for (std::size_t j = 0; j < n; ++j) t.rows[r][j] = a_eq(r, j);
        t.rows[r][n_cols] = b_eq[r];
    }
    for (std::size_t r = 0; r < mub; ++r) {
        auto& row = t.rows[meq + r];
        for (std::size_t j = 0; j < n; ++j) row[j] = a_ub(r, j);
        row[slack0 + r] = 1.0;
        row[n_cols] = b_ub[r];
    }
    for (std::size_t r = 0; r < m; ++r) {
        if (t.rows[r][n_cols] < 0.0)
            for (double& v : t.rows[r]) v = -v;
        t.rows[r][art0 + r] = 1.0;
        t.basis[r] = art0 + r;
    }

    // Phase 1: minimize the sum of artificials.
    std::vector<bool> allowed(n_cols, true);
    t.top.assign(n_cols + 1, 0.0);
    for (std::size_t r = 0; r < m; ++r) t.top[art0 + r] = 1.0;
    for (std::size_t r = 0; r < m; ++r)  // make basic artificial columns canonical
        for (std::size_t c = 0; c <= n_cols; ++c) t.top[c] -= t.rows[r][c];
    LpStatus st = t.run(allowed);
    if (st == LpStatus::Unbounded) return {LpStatus::Unbounded, {}, 0.0};
    if (-t.top[n_cols] > 1e-7) return {LpStatus::Infeasible, {}, 0.0};

    // Drive remaining artificials out of the basis; a row with no usable
    // pivot column is redundant and its artificial stays basic at zero.
    for (std::size_t r = 0; r < m; ++r) {
        if (t.basis[r] < art0) continue;
        std::size_t pc = art0;
        for (std::size_t c = 0; c < art0; ++c)
            if (std::abs(t.rows[r][c]) > 1e-7) { pc = c; break; }
        if (pc < art0) t.pivot(r, pc);
    }
    for (std::size_t c = art0; c < n_cols; ++c) allowed[c] = false;

    // Phase 2: the real objective.
    t.top.assign(n_cols + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) t.top[j] = -c[j];
    for (std::size_t r = 0; r < m; ++r) {
        std::size_t b = t.basis[r];
        double f = t.top[b];
        if (f == 0.0) continue;
        for (std::size_t col = 0; col <= n_cols; ++col) t.top[col] -= f * t.rows[r][col];
    }
    st = t.run(allowed);
    if (st != LpStatus::Optimal) return {st, {}, 0.0};

    Result res;
    res.status = LpStatus::Optimal;
    res.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        if (t.basis[r] < n) res.x[t.basis[r]] = t.rhs(r);
    res.objective = t.top[n_cols];
    return res;
}

}  // namespace simplex

namespace {

struct LoweredProblem {
    std::vector<double> c;
    Grid<double> a_eq;
    std::vector<double> b_eq;
    Grid<double> a_ub;
    std::vector<double> b_ub;
    std::vector<std::size_t> active_types;  // types with lambda > 0
    std::size_t n_extra = 0;                // columns appended after the x block
};

// Types with lambda_i = 0 are dropped; their allocations are forced to zero.
LoweredProblem lower(const FluidProblem& p, double epsilon, std::size_t n_extra) {
    const std::size_t m = p.n_servers();
    const std::size_t k = p.n_constraints();
    LoweredProblem lp;
    lp.n_extra = n_extra;
    for (std::size_t i = 0; i < p.n_types(); ++i)
        if (p.lambda[i] > 0.0) lp.active_types.push_back(i);
    const std::size_t na = lp.active_types.size();
    const std::size_t n_vars = na * m + n_extra;

    lp.c.assign(n_vars, 0.0);
    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t j = 0; j < m; ++j) lp.c[a * m + j] = p.r(lp.active_types[a], j);

    lp.a_eq = Grid<double>(na, n_vars, 0.0);
    lp.b_eq.resize(na);
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t j = 0; j < m; ++j) lp.a_eq(a, a * m + j) = 1.0;
        lp.b_eq[a] = p.lambda[lp.active_types[a]];
    }

    lp.a_ub = Grid<double>(k * m, n_vars, 0.0);
    lp.b_ub.resize(k * m);
    for (std::size_t kk = 0; kk < k; ++kk)
        for (std::size_t j = 0; j < m; ++j) {
            std::size_t row = kk * m + j;
            for (std::size_t a = 0; a < na; ++a)
                lp.a_ub(row, a * m + j) = p.w[kk](lp.active_types[a], j);
            lp.b_ub[row] = p.rho[kk][j] - epsilon;
        }
    return lp;
}

Grid<double> unpack_x(const FluidProblem& p, const LoweredProblem& lp,
                      const std::vector<double>& x) {
    Grid<double> full(p.n_types(), p.n_servers(), 0.0);
    for (std::size_t a = 0; a < lp.active_types.size(); ++a)
        for (std::size_t j = 0; j < p.n_servers(); ++j)
            full(lp.active_types[a], j) = x[a * p.n_servers() + j];
    return full;
}

void certify(const FluidProblem& p, const Grid<double>& x, double epsilon) {
    for (std::size_t i = 0; i < p.n_types(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < p.n_servers(); ++j) {
            if (x(i, j) < -1e-9) throw std::logic_error("fluid LP: negative allocation");
            s += x(i, j);
        }
        if (std::abs(s - p.lambda[i]) > 1e-9)
            throw std::logic_error("fluid LP: conservation residual beyond tolerance");
    }
    for (std::size_t k = 0; k < p.n_constraints(); ++k)
        for (std::size_t j = 0; j < p.n_servers(); ++j) {
            double lhs = 0.0;
            for (std::size_t i = 0; i < p.n_types(); ++i) lhs += p.w[k](i, j) * x(i, j);
            if (lhs + epsilon > p.rho[k][j] + 1e-9)
                throw std::logic_error("fluid LP: constraint violated beyond tolerance");
        }
}

}  // namespace

LpSolution solve_fluid_lp(const FluidProblem& problem) {
    LoweredProblem lp = lower(problem, problem.epsilon, 0);
    auto res = simplex::maximize(lp.c, lp.a_eq, lp.b_eq, lp.a_ub, lp.b_ub);
    if (res.status == LpStatus::Unbounded)
        throw std::logic_error("fluid LP reported unbounded; problem is always bounded");
    LpSolution sol;
    sol.status = res.status;
    if (res.status == LpStatus::Optimal) {
        sol.x_star = unpack_x(problem, lp, res.x);
        sol.objective = res.objective;
        certify(problem, sol.x_star, problem.epsilon);
    }
    return sol;
}

SlaterResult slater_margin(const FluidProblem& problem) {
    // max delta  s.t.  x feasible, sum_i w x + delta <= rho; delta is free,
    // split into a positive and a negative part.
    LoweredProblem lp = lower(problem, 0.0, 2);
    const std::size_t n_vars = lp.c.size();
    std::fill(lp.c.begin(), lp.c.end(), 0.0);
    lp.c[n_vars - 2] = 1.0;
    lp.c[n_vars - 1] = -1.0;
    for (std::size_t row = 0; row < lp.b_ub.size(); ++row) {
        lp.a_ub(row, n_vars - 2) = 1.0;
        lp.a_ub(row, n_vars - 1) = -1.0;
    }
    auto res = simplex::maximize(lp.c, lp.a_eq, lp.b_eq, lp.a_ub, lp.b_ub);
    SlaterResult out;
    if (res.status != LpStatus::Optimal || res.objective < -1e-9) {
        out.status = LpStatus::Infeasible;
        return out;
    }
    out.status = LpStatus::Optimal;
    out.delta = std::max(res.objective, 0.0);
    out.x = unpack_x(problem, lp, res.x);
    return out;
}

TheoremParams theorem_params(const FluidProblem& problem, long horizon, double c_lambda,
                             double c_u) {
    if (horizon < 1) throw std::invalid_argument("theorem_params: horizon must be >= 1");
    if (c_lambda <= 0.0 || c_u <= 0.0)
        throw std::invalid_argument("theorem_params: bounds must be positive");
    auto slater = slater_margin(problem);
    if (slater.status != LpStatus::Optimal)
        throw std::runtime_error("theorem_params: base problem infeasible");

    const double mk = static_cast<double>(problem.n_servers() * problem.n_constraints());
    const double sqrt_mk = std::sqrt(mk);
    const double t = static_cast<double>(horizon);
    const double cc = c_lambda * c_lambda * c_u * c_u;

    // B and epsilon are mutually defined; two passes, first with epsilon = 0.
    const double b0 = mk * cc;
    const double eps0 = 2.0 * std::sqrt(b0 * sqrt_mk) / std::sqrt(t);
    const double b = mk * (cc + eps0 * eps0);
    const double eps = 2.0 * std::sqrt(b * sqrt_mk) / std::sqrt(t);

    double sum_lambda = std::accumulate(problem.lambda.begin(), problem.lambda.end(), 0.0);

    TheoremParams out;
    out.delta = slater.delta;
    out.b = b;
    out.epsilon = eps;
    out.v = slater.delta / (2.0 * sum_lambda) * std::sqrt(t * b / sqrt_mk);
    out.gamma = slater.delta / 2.0 - eps;
    out.nu_max = std::max(out.gamma, mk * c_lambda * c_u);
    out.precondition_ok = slater.delta >= 4.0 * eps;
    out.epsilon_residual = eps > 0.0 ? std::abs(eps - eps0) / eps : 0.0;
    return out;
}

std::vector<GapCheck> tightness_gap_bound_check(const FluidProblem& problem,
                                                const std::vector<double>& epsilon_grid) {
    auto slater = slater_margin(problem);
    if (slater.status != LpStatus::Optimal || slater.delta <= 0.0)
        throw std::runtime_error("tightness_gap_bound_check: requires delta > 0");
    for (double eps : epsilon_grid)
        if (eps >= slater.delta)
            throw std::invalid_argument("tightness_gap_bound_check: epsilon must be < delta");

    FluidProblem base = problem;
    base.epsilon = 0.0;
    auto sol0 = solve_fluid_lp(base);
    if (sol0.status != LpStatus::Optimal)
        throw std::runtime_error("tightness_gap_bound_check: base problem infeasible");

    double sum_lambda = std::accumulate(problem.lambda.begin(), problem.lambda.end(), 0.0);
    std::vector<GapCheck> out;
    for (double eps : epsilon_grid) {
        FluidProblem tight = problem;
        tight.epsilon = eps;
        auto sol = solve_fluid_lp(tight);
        GapCheck c;
        c.epsilon = eps;
        c.feasible = sol.status == LpStatus::Optimal;
        c.bound = eps / slater.delta * sum_lambda;
        if (c.feasible) {
            c.gap = sol0.objective - sol.objective;
            c.holds = c.gap <= c.bound + 1e-9;
        }
        out.push_back(c);
    }
    return out;
}

FluidProblem fluid_from_instance(const Instance& inst, double epsilon) {
    FluidProblem p;
    p.epsilon = epsilon;
    p.lambda.reserve(inst.n_types);
    for (const auto& m : inst.arrival_models) p.lambda.push_back(m.mean());
    p.r = inst.reward_means;
    double total = inst.total_arrival_mean();
    for (const auto& spec : inst.constraints) {
        Grid<double> w(inst.n_types, inst.n_servers);
        for (std::size_t i = 0; i < inst.n_types; ++i)
            for (std::size_t j = 0; j < inst.n_servers; ++j)
                w(i, j) = spec.weight_model(i, j).mean();
        std::vector<double> rho(inst.n_servers);
        for (std::size_t j = 0; j < inst.n_servers; ++j)
            rho[j] = spec.requirement_model[j].mean(total);
        p.w.push_back(std::move(w));
        p.rho.push_back(std::move(rho));
    }
    return p;
}

}  // namespace pond
