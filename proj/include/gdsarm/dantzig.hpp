#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gdsarm/design.hpp"
#include "gdsarm/simplex.hpp"

namespace gdsarm {

/// Dantzig selector estimate  argmin ||beta||_1  s.t.  ||X^T (y - X beta)||_inf <= delta.
struct DantzigSolution {
    Eigen::VectorXd beta;
    double delta = 0.0;
    LpStatus lp_status = LpStatus::infeasible;
    std::size_t pivots = 0;
    /// The constraint holds within 1e-7 (also possible after an iteration limit).
    bool feasible = false;

    bool ok() const { return lp_status == LpStatus::optimal; }
};

/// The ten interior points k * ||X^T y||_inf / 11, k = 1..10, ascending.
std::vector<double> delta_grid(const ModelMatrix& matrix);

DantzigSolution dantzig_select(const ModelMatrix& matrix, double delta, const LpOptions& options = {});

/// Solves for every delta, reusing one tableau from the largest delta down.
/// Results are returned in the order of `deltas`.
std::vector<DantzigSolution> dantzig_path(const ModelMatrix& matrix, std::span<const double> deltas,
                                          const LpOptions& options = {});

/// Closed-form solution for orthogonal designs (X^T X = (n-1) I):
/// beta_j = sign(b_j) max(|b_j| - delta, 0) / (n - 1) with b = X^T y.
Eigen::VectorXd orthogonal_dantzig_oracle(const ModelMatrix& matrix, double delta);

/// ||X^T (y - X beta)||_inf.
double correlation_residual(const ModelMatrix& matrix, const Eigen::VectorXd& beta);

} // namespace gdsarm
