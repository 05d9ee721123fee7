#include "gdsarm/dantzig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gdsarm/error.hpp"

namespace gdsarm {

namespace {

constexpr double kZeroSnap = 1e-9;
constexpr double kFeasibility = 1e-7;
constexpr double kOrthogonality = 1e-8;

/// Split-variable LP over the non-degenerate columns: variables (beta+, beta-),
/// rows  G beta <= delta + b  and  -G beta <= delta - b.
struct SplitLp {
    std::vector<std::size_t> active;
    Eigen::MatrixXd a;
    Eigen::VectorXd b; // X^T y on the active columns
    std::vector<double> cost;

    explicit SplitLp(const ModelMatrix& matrix)
    {
        for (std::size_t j = 0; j < matrix.size(); ++j) {
            if (!matrix.is_degenerate(j)) active.push_back(j);
        }
        const auto p = static_cast<Eigen::Index>(active.size());
        Eigen::MatrixXd x(matrix.columns.rows(), p);
        for (Eigen::Index k = 0; k < p; ++k) x.col(k) = matrix.columns.col(static_cast<Eigen::Index>(active[k]));
        const Eigen::MatrixXd g = x.transpose() * x;
        b = x.transpose() * matrix.y;
        a.resize(2 * p, 2 * p);
        a << g, -g, -g, g;
        cost.assign(static_cast<std::size_t>(2 * p), 1.0);
    }

    std::vector<double> rhs(double delta) const
    {
        const auto p = b.size();
        std::vector<double> r(static_cast<std::size_t>(2 * p));
        for (Eigen::Index k = 0; k < p; ++k) {
            r[static_cast<std::size_t>(k)] = delta + b(k);
            r[static_cast<std::size_t>(k + p)] = delta - b(k);
        }
        return r;
    }

    LpOptions options(LpOptions o) const
    {
        if (o.max_pivots == 0) o.max_pivots = 50 * 2 * std::max<std::size_t>(active.size(), 1);
        return o;
    }
};

DantzigSolution finish(const ModelMatrix& matrix, const SplitLp& lp, const LpResult& res, double delta)
{
    DantzigSolution sol;
    sol.delta = delta;
    sol.lp_status = res.status;
    sol.pivots = res.pivots;
    sol.beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(matrix.size()));
    const std::size_t p = lp.active.size();
    if (res.x.size() == 2 * p) {
        for (std::size_t k = 0; k < p; ++k) {
            double v = res.x[k] - res.x[k + p];
            if (std::abs(v) < kZeroSnap) v = 0.0;
            sol.beta(static_cast<Eigen::Index>(lp.active[k])) = v;
        }
    }
    sol.feasible = correlation_residual(matrix, sol.beta) <= delta + kFeasibility;
    if (!sol.feasible && sol.lp_status == LpStatus::iteration_limit) {
        // Fall back to the zero vector when it is the only feasible point we know.
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(sol.beta.size());
        if (correlation_residual(matrix, zero) <= delta + kFeasibility) {
            sol.beta = zero;
            sol.feasible = true;
        }
    }
    return sol;
}

void check_delta(double delta)
{
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw ValidationError("delta must be a finite value >= 0");
}

} // namespace

double correlation_residual(const ModelMatrix& matrix, const Eigen::VectorXd& beta)
{
    const Eigen::VectorXd r = matrix.y - matrix.columns * beta;
    const Eigen::VectorXd c = matrix.columns.transpose() * r;
    return c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
}

std::vector<double> delta_grid(const ModelMatrix& matrix)
{
    const Eigen::VectorXd b = matrix.columns.transpose() * matrix.y;
    const double dmax = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
    if (matrix.y.squaredNorm() == 0.0 || !(dmax > 0.0)) throw ValidationError("constant response");
    std::vector<double> grid(10);
    for (int k = 1; k <= 10; ++k) grid[static_cast<std::size_t>(k - 1)] = k * dmax / 11.0;
    return grid;
}

DantzigSolution dantzig_select(const ModelMatrix& matrix, double delta, const LpOptions& options)
{
    check_delta(delta);
    const SplitLp lp(matrix);
    const auto rhs = lp.rhs(delta);
    const auto res = lp_solve(lp.cost, lp.a, rhs, lp.options(options));
    return finish(matrix, lp, res, delta);
}

std::vector<DantzigSolution> dantzig_path(const ModelMatrix& matrix, std::span<const double> deltas,
                                          const LpOptions& options)
{
    for (double d : deltas) check_delta(d);
    std::vector<std::size_t> order(deltas.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) { return deltas[l] > deltas[r]; });

    const SplitLp lp(matrix);
    const auto opts = lp.options(options);
    std::vector<DantzigSolution> out(deltas.size());
    if (deltas.empty()) return out;

    SimplexTableau tableau(lp.a, lp.rhs(deltas[order.front()]), lp.cost);
    bool first = true;
    for (auto idx : order) {
        const double delta = deltas[idx];
        if (!first) tableau.set_rhs(lp.rhs(delta));
        first = false;
        auto sol = finish(matrix, lp, tableau.solve(opts), delta);
        if (!sol.ok() || !sol.feasible) {
            // Accumulated round-off or a stalled warm start: solve from scratch.
            tableau = SimplexTableau(lp.a, lp.rhs(delta), lp.cost);
            sol = finish(matrix, lp, tableau.solve(opts), delta);
        }
        out[idx] = std::move(sol);
    }
    return out;
}

Eigen::VectorXd orthogonal_dantzig_oracle(const ModelMatrix& matrix, double delta)
{
    check_delta(delta);
    const double scale = static_cast<double>(matrix.runs()) - 1.0;
    const Eigen::MatrixXd gram = matrix.columns.transpose() * matrix.columns;
    const Eigen::MatrixXd target = scale * Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
    if ((gram - target).cwiseAbs().maxCoeff() > kOrthogonality * std::max(1.0, scale)) {
        throw ValidationError("matrix columns are not orthogonal");
    }
    const Eigen::VectorXd b = matrix.columns.transpose() * matrix.y;
    Eigen::VectorXd beta(b.size());
    for (Eigen::Index j = 0; j < b.size(); ++j) {
        const double shrunk = std::max(std::abs(b(j)) - delta, 0.0);
        beta(j) = (b(j) > 0 ? shrunk : -shrunk) / scale;
    }
    return beta;
}

} // namespace gdsarm
