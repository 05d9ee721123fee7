#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gdsarm/design.hpp"

namespace gdsarm {

/// OLS refit on a subset of model-matrix columns.  The intercept is absorbed
/// by centering, so df_resid = n - k.
struct OlsFit {
    std::vector<Effect> effects;
    std::vector<std::size_t> columns; // positions in the source ModelMatrix
    Eigen::VectorXd coefficients;
    double rss = 0.0;
    double tss = 0.0; // ||y||^2 of the centered response
    std::size_t df_resid = 0;
    std::size_t n = 0;
    /// Diagonal of (X_S^T X_S)^{-1}.
    Eigen::VectorXd unscaled_variance;

    std::size_t size() const { return effects.size(); }
};

/// Least squares on the given columns through a column-pivoted Householder QR.
/// Throws NumericalError naming the first dependent column when the subset is
/// rank deficient at relative tolerance 1e-10, ValidationError when |S| > n-1.
OlsFit ols_fit(const ModelMatrix& matrix, std::span<const std::size_t> columns);

/// True when the columns have full numerical rank (same tolerance as ols_fit).
bool has_full_rank(const ModelMatrix& matrix, std::span<const std::size_t> columns);

/// Greedy walk over `priority`, keeping each column that leaves the kept set
/// full rank, until `cap` columns are kept.
std::vector<std::size_t> full_rank_subset(const ModelMatrix& matrix, std::span<const std::size_t> priority,
                                          std::size_t cap);

/// n ln(rss/n) + k ln(n), with rss clamped below at 1e-12.
double bic(double rss, std::size_t n, std::size_t k);

/// 1 - rss / ||y||^2 on the centered response.
double r_squared(const OlsFit& fit, const ModelMatrix& matrix);

/// Upper tail P(T > t) of Student's t with df degrees of freedom.
double student_t_sf(double t, double df);

/// Two-sided t-test p-values, one per coefficient.  When rss is zero to
/// machine precision every p-value is 0 except for numerically zero
/// coefficients, which get 1.
std::vector<double> coefficient_p_values(const OlsFit& fit);

} // namespace gdsarm
