#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace gdsarm {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string_view to_string(LpStatus status);

struct LpOptions {
    /// Pivot budget per solve; 0 means 50 * (variables + constraints).
    std::size_t max_pivots = 0;
    /// Consecutive degenerate pivots tolerated before switching to the
    /// least-index rule, which cannot cycle.
    std::size_t degenerate_before_bland = 50;
    /// Always use the least-index rule.
    bool bland_only = false;
};

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double objective = 0.0;
    std::size_t pivots = 0;
    /// True when x satisfies the constraints (always for optimal results).
    bool feasible = false;
};

/// Dense tableau for  min c^T x  s.t.  A x <= b,  x >= 0.
///
/// The slack basis is the starting point.  Rows with negative right-hand side
/// are repaired by the dual simplex method, run against max(c, 0) (which the
/// slack basis is dual feasible for); the primal simplex method then finishes
/// with the true costs.  After an optimal solve, set_rhs() keeps the basis so
/// that the next solve() warm-starts with dual simplex pivots only.
class SimplexTableau {
public:
    SimplexTableau(const Eigen::MatrixXd& a, std::span<const double> b, std::span<const double> c);

    LpResult solve(const LpOptions& options = {});
    void set_rhs(std::span<const double> b);

    std::size_t variables() const { return vars_; }
    std::size_t constraints() const { return rows_; }

private:
    double& at(std::size_t r, std::size_t c) { return t_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return t_[r * cols_ + c]; }

    void reset();
    void pivot(std::size_t row, std::size_t col);
    void price(std::span<const double> cost);
    bool dual_phase(std::size_t budget, const LpOptions& options);
    bool primal_phase(std::size_t budget, const LpOptions& options);
    bool primal_feasible() const;
    bool dual_feasible() const;
    LpResult extract(LpStatus status) const;

    std::size_t rows_ = 0;
    std::size_t vars_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> t_;
    std::vector<double> initial_;
    std::vector<double> rhs_;
    std::vector<double> cost_;     // length cols_, zero on slacks
    std::vector<double> reduced_;  // reduced costs for the active objective
    std::vector<std::size_t> basis_;
    std::vector<std::ptrdiff_t> row_of_; // basic row of each column, -1 if nonbasic
    std::vector<std::size_t> nz_;        // scratch: pivot row support
    std::vector<double> original_b_;
    std::size_t pivots_ = 0;
    double feas_tol_ = 1e-9;
    double cost_tol_ = 1e-9;
    bool warm_ = false;
    LpStatus last_ = LpStatus::infeasible;
};

/// One-shot solve of  min c^T x  s.t.  A x <= b,  x >= 0.
LpResult lp_solve(std::span<const double> c, const Eigen::MatrixXd& a, std::span<const double> b,
                  const LpOptions& options = {});

} // namespace gdsarm
