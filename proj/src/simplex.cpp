#include "gdsarm/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "gdsarm/error.hpp"

namespace gdsarm {

namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kRatioTie = 1e-12;

double max_abs(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

std::string_view to_string(LpStatus status)
{
    switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration-limit";
    }
    return "unknown";
}

SimplexTableau::SimplexTableau(const Eigen::MatrixXd& a, std::span<const double> b, std::span<const double> c)
    : rows_(static_cast<std::size_t>(a.rows())), vars_(static_cast<std::size_t>(a.cols())),
      cols_(vars_ + rows_)
{
    if (b.size() != rows_ || c.size() != vars_) {
        throw ValidationError("LP dimensions do not agree");
    }
    if (!a.allFinite() || !std::all_of(b.begin(), b.end(), [](double v) { return std::isfinite(v); }) ||
        !std::all_of(c.begin(), c.end(), [](double v) { return std::isfinite(v); })) {
        throw ValidationError("LP data must be finite");
    }
    t_.assign(rows_ * cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t v = 0; v < vars_; ++v) {
            at(r, v) = a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(v));
        }
        at(r, vars_ + r) = 1.0;
    }
    cost_.assign(cols_, 0.0);
    std::copy(c.begin(), c.end(), cost_.begin());
    cost_tol_ = 1e-9 * (1.0 + max_abs(c));
    reduced_.assign(cols_, 0.0);
    basis_.resize(rows_);
    row_of_.assign(cols_, -1);
    for (std::size_t r = 0; r < rows_; ++r) {
        basis_[r] = vars_ + r;
        row_of_[vars_ + r] = static_cast<std::ptrdiff_t>(r);
    }
    nz_.reserve(cols_);
    original_b_.assign(b.begin(), b.end());
    rhs_ = original_b_;
    feas_tol_ = 1e-10 * (1.0 + max_abs(b));
    initial_ = t_;
}

void SimplexTableau::reset()
{
    t_ = initial_;
    rhs_ = original_b_;
    std::fill(row_of_.begin(), row_of_.end(), -1);
    for (std::size_t r = 0; r < rows_; ++r) {
        basis_[r] = vars_ + r;
        row_of_[vars_ + r] = static_cast<std::ptrdiff_t>(r);
    }
    warm_ = false;
}

void SimplexTableau::set_rhs(std::span<const double> b)
{
    if (b.size() != rows_) throw ValidationError("LP right-hand side has wrong length");
    original_b_.assign(b.begin(), b.end());
    feas_tol_ = 1e-10 * (1.0 + max_abs(b));
    // The slack block of the tableau holds B^{-1}.
    for (std::size_t r = 0; r < rows_; ++r) {
        const double* row = &t_[r * cols_ + vars_];
        double s = 0.0;
        for (std::size_t k = 0; k < rows_; ++k) s += row[k] * b[k];
        rhs_[r] = s;
    }
    warm_ = last_ == LpStatus::optimal;
}

void SimplexTableau::pivot(std::size_t row, std::size_t col)
{
    double* prow = &t_[row * cols_];
    const double inv = 1.0 / prow[col];
    nz_.clear();
    for (std::size_t k = 0; k < cols_; ++k) {
        if (prow[k] != 0.0) {
            prow[k] *= inv;
            nz_.push_back(k);
        }
    }
    prow[col] = 1.0;
    rhs_[row] *= inv;
    const bool dense = nz_.size() * 2 > cols_;

    for (std::size_t r = 0; r < rows_; ++r) {
        if (r == row) continue;
        double* trow = &t_[r * cols_];
        const double f = trow[col];
        if (f == 0.0) continue;
        if (dense) {
            for (std::size_t k = 0; k < cols_; ++k) trow[k] -= f * prow[k];
        } else {
            for (auto k : nz_) trow[k] -= f * prow[k];
        }
        trow[col] = 0.0;
        rhs_[r] -= f * rhs_[row];
    }
    const double f = reduced_[col];
    if (f != 0.0) {
        for (auto k : nz_) reduced_[k] -= f * prow[k];
    }
    reduced_[col] = 0.0;

    row_of_[basis_[row]] = -1;
    basis_[row] = col;
    row_of_[col] = static_cast<std::ptrdiff_t>(row);
    ++pivots_;
}

void SimplexTableau::price(std::span<const double> cost)
{
    std::copy(cost.begin(), cost.end(), reduced_.begin());
    for (std::size_t r = 0; r < rows_; ++r) {
        const double cb = cost[basis_[r]];
        if (cb == 0.0) continue;
        const double* trow = &t_[r * cols_];
        for (std::size_t k = 0; k < cols_; ++k) reduced_[k] -= cb * trow[k];
    }
    for (auto b : basis_) reduced_[b] = 0.0;
}

bool SimplexTableau::primal_feasible() const
{
    return std::all_of(rhs_.begin(), rhs_.end(), [&](double v) { return v >= -feas_tol_; });
}

bool SimplexTableau::dual_feasible() const
{
    for (std::size_t k = 0; k < cols_; ++k) {
        if (row_of_[k] < 0 && reduced_[k] < -cost_tol_) return false;
    }
    return true;
}

bool SimplexTableau::dual_phase(std::size_t budget, const LpOptions& options)
{
    bool bland = options.bland_only;
    std::size_t degenerate = 0;
    for (;;) {
        std::size_t leave = rows_;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (rhs_[r] >= -feas_tol_) continue;
            if (leave == rows_) {
                leave = r;
            } else if (bland ? basis_[r] < basis_[leave] : rhs_[r] < rhs_[leave]) {
                leave = r;
            }
        }
        if (leave == rows_) return true;
        if (pivots_ >= budget) {
            last_ = LpStatus::iteration_limit;
            return false;
        }

        const double* trow = &t_[leave * cols_];
        std::size_t enter = cols_;
        double best_ratio = 0.0;
        double best_mag = 0.0;
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = trow[k];
            if (a >= -kPivotTolerance || row_of_[k] >= 0) continue;
            const double ratio = std::max(reduced_[k], 0.0) / -a;
            if (enter == cols_ || ratio < best_ratio - kRatioTie) {
                enter = k;
                best_ratio = ratio;
                best_mag = -a;
            } else if (!bland && ratio <= best_ratio + kRatioTie && -a > best_mag) {
                enter = k;
                best_ratio = std::min(best_ratio, ratio);
                best_mag = -a;
            }
        }
        if (enter == cols_) {
            last_ = LpStatus::infeasible;
            return false;
        }
        if (best_ratio <= kRatioTie) {
            if (++degenerate > options.degenerate_before_bland) bland = true;
        } else {
            degenerate = 0;
        }
        pivot(leave, enter);
    }
}

bool SimplexTableau::primal_phase(std::size_t budget, const LpOptions& options)
{
    bool bland = options.bland_only;
    std::size_t degenerate = 0;
    for (;;) {
        std::size_t enter = cols_;
        for (std::size_t k = 0; k < cols_; ++k) {
            if (row_of_[k] >= 0 || reduced_[k] >= -cost_tol_) continue;
            if (enter == cols_) {
                enter = k;
                if (bland) break;
            } else if (reduced_[k] < reduced_[enter]) {
                enter = k;
            }
        }
        if (enter == cols_) return true;
        if (pivots_ >= budget) {
            last_ = LpStatus::iteration_limit;
            return false;
        }

        std::size_t leave = rows_;
        double best_ratio = 0.0;
        double best_mag = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            const double a = at(r, enter);
            if (a <= kPivotTolerance) continue;
            const double ratio = std::max(rhs_[r], 0.0) / a;
            if (leave == rows_ || ratio < best_ratio - kRatioTie) {
                leave = r;
                best_ratio = ratio;
                best_mag = a;
            } else if (ratio <= best_ratio + kRatioTie) {
                const bool take = bland ? basis_[r] < basis_[leave] : a > best_mag;
                if (take) {
                    leave = r;
                    best_ratio = std::min(best_ratio, ratio);
                    best_mag = a;
                }
            }
        }
        if (leave == rows_) {
            last_ = LpStatus::unbounded;
            return false;
        }
        if (best_ratio <= kRatioTie) {
            if (++degenerate > options.degenerate_before_bland) bland = true;
        } else {
            degenerate = 0;
        }
        pivot(leave, enter);
    }
}

LpResult SimplexTableau::extract(LpStatus status) const
{
    LpResult out;
    out.status = status;
    out.pivots = pivots_;
    out.x.assign(vars_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        if (basis_[r] < vars_) out.x[basis_[r]] = std::max(rhs_[r], 0.0);
    }
    for (std::size_t v = 0; v < vars_; ++v) out.objective += cost_[v] * out.x[v];
    out.feasible = primal_feasible();
    return out;
}

LpResult SimplexTableau::solve(const LpOptions& options)
{
    const std::size_t budget = options.max_pivots ? options.max_pivots : 50 * cols_;
    pivots_ = 0;

    if (!primal_feasible()) {
        bool use_true_cost = false;
        if (warm_) {
            price(cost_);
            use_true_cost = dual_feasible();
        }
        if (!use_true_cost) {
            std::vector<double> surrogate(cols_);
            std::transform(cost_.begin(), cost_.end(), surrogate.begin(),
                           [](double v) { return std::max(v, 0.0); });
            // Only the slack basis is guaranteed dual feasible for max(c, 0).
            if (std::any_of(basis_.begin(), basis_.end(), [&](std::size_t b) { return b < vars_; })) {
                reset();
            }
            price(surrogate);
        }
        if (!dual_phase(budget, options)) {
            warm_ = false;
            return extract(last_);
        }
    }
    price(cost_);
    if (!primal_phase(budget, options)) {
        warm_ = false;
        return extract(last_);
    }
    last_ = LpStatus::optimal;
    warm_ = true;
    return extract(LpStatus::optimal);
}

LpResult lp_solve(std::span<const double> c, const Eigen::MatrixXd& a, std::span<const double> b,
                  const LpOptions& options)
{
    SimplexTableau tableau(a, b, c);
    return tableau.solve(options);
}

} // namespace gdsarm
