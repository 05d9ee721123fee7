#include "gdsarm/linreg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

#include "gdsarm/error.hpp"

namespace gdsarm {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr double kRssFloor = 1e-12;
constexpr double kExactFit = 1e-24;

Eigen::MatrixXd gather(const ModelMatrix& matrix, std::span<const std::size_t> columns)
{
    Eigen::MatrixXd x(matrix.columns.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (columns[k] >= matrix.size()) throw ValidationError("column index out of range");
        x.col(static_cast<Eigen::Index>(k)) = matrix.columns.col(static_cast<Eigen::Index>(columns[k]));
    }
    return x;
}

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> decompose(const Eigen::MatrixXd& x)
{
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x.rows(), x.cols());
    qr.setThreshold(kRankTolerance);
    qr.compute(x);
    return qr;
}

} // namespace

bool has_full_rank(const ModelMatrix& matrix, std::span<const std::size_t> columns)
{
    if (columns.empty()) return true;
    if (columns.size() > matrix.runs()) return false;
    const auto x = gather(matrix, columns);
    if (x.cwiseAbs().maxCoeff() == 0.0) return false;
    return decompose(x).rank() == static_cast<Eigen::Index>(columns.size());
}

std::vector<std::size_t> full_rank_subset(const ModelMatrix& matrix, std::span<const std::size_t> priority,
                                          std::size_t cap)
{
    std::vector<std::size_t> kept(priority.begin(), priority.begin() + std::min(cap, priority.size()));
    if (has_full_rank(matrix, kept)) return kept;
    kept.clear();
    for (auto c : priority) {
        if (kept.size() >= cap) break;
        kept.push_back(c);
        if (!has_full_rank(matrix, kept)) kept.pop_back();
    }
    return kept;
}

OlsFit ols_fit(const ModelMatrix& matrix, std::span<const std::size_t> columns)
{
    const std::size_t n = matrix.runs();
    const std::size_t k = columns.size();
    if (k + 1 > n) {
        throw ValidationError("subset of " + std::to_string(k) + " effects is too large for " +
                              std::to_string(n) + " runs");
    }

    OlsFit fit;
    fit.n = n;
    fit.df_resid = n - k;
    fit.tss = matrix.y.squaredNorm();
    fit.columns.assign(columns.begin(), columns.end());
    for (auto c : columns) fit.effects.push_back(matrix.effects.at(c));

    if (k == 0) {
        fit.rss = matrix.y.squaredNorm();
        return fit;
    }

    const auto x = gather(matrix, columns);
    const auto qr = decompose(x);
    if (qr.rank() < static_cast<Eigen::Index>(k) || x.cwiseAbs().maxCoeff() == 0.0) {
        const auto dependent = static_cast<std::size_t>(qr.colsPermutation().indices()(qr.rank()));
        throw NumericalError("rank-deficient subset: column " + std::to_string(columns[dependent]) +
                             " is linearly dependent on the others");
    }
    fit.coefficients = qr.solve(matrix.y);
    fit.rss = (matrix.y - x * fit.coefficients).squaredNorm();

    // diag((X^T X)^{-1}) = diag(P R^{-1} R^{-T} P^T)
    const auto ke = static_cast<Eigen::Index>(k);
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(ke, ke).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd rinv =
        r.template triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(ke, ke));
    const Eigen::VectorXd permuted = rinv.rowwise().squaredNorm();
    fit.unscaled_variance.resize(ke);
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = 0; i < ke; ++i) fit.unscaled_variance(perm(i)) = permuted(i);
    return fit;
}

double bic(double rss, std::size_t n, std::size_t k)
{
    const double nn = static_cast<double>(n);
    return nn * std::log(std::max(rss, kRssFloor) / nn) + static_cast<double>(k) * std::log(nn);
}

double r_squared(const OlsFit& fit, const ModelMatrix& matrix)
{
    const double tss = matrix.y.squaredNorm();
    if (tss == 0.0) return 0.0;
    return 1.0 - fit.rss / tss;
}

double student_t_sf(double t, double df)
{
    if (!(df > 0.0)) throw ValidationError("degrees of freedom must be positive");
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
    if (t == 0.0) return 0.5;
    const double x = df / (df + t * t);
    const double tail = 0.5 * boost::math::ibeta(df / 2.0, 0.5, x);
    return t > 0 ? tail : 1.0 - tail;
}

std::vector<double> coefficient_p_values(const OlsFit& fit)
{
    if (fit.df_resid == 0) throw NumericalError("saturated model");
    std::vector<double> p(fit.size(), 0.0);
    // An exact fit leaves no residual variance: nonzero terms are certain and
    // terms with a numerically zero coefficient carry nothing.
    if (fit.rss <= kExactFit * fit.tss) {
        const double scale = fit.size() ? fit.coefficients.cwiseAbs().maxCoeff() : 0.0;
        for (std::size_t j = 0; j < fit.size(); ++j) {
            if (std::abs(fit.coefficients(static_cast<Eigen::Index>(j))) <= 1e-10 * scale) p[j] = 1.0;
        }
        return p;
    }
    const double sigma2 = fit.rss / static_cast<double>(fit.df_resid);
    for (std::size_t j = 0; j < fit.size(); ++j) {
        const auto je = static_cast<Eigen::Index>(j);
        const double beta = fit.coefficients(je);
        if (beta == 0.0) {
            p[j] = 1.0;
            continue;
        }
        const double se = std::sqrt(sigma2 * fit.unscaled_variance(je));
        p[j] = std::min(1.0, 2.0 * student_t_sf(std::abs(beta / se), static_cast<double>(fit.df_resid)));
    }
    return p;
}

} // namespace gdsarm
