#include "gdsarm/gds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gdsarm/error.hpp"

namespace gdsarm {

namespace {

constexpr std::size_t kMaxLloydIterations = 1000;

bool all_equal(std::span<const double> v)
{
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

TwoClusterSplit single_cluster(std::span<const double> values)
{
    TwoClusterSplit out;
    auto& target = values.front() != 0.0 ? out.high : out.low;
    target.resize(values.size());
    std::iota(target.begin(), target.end(), std::size_t{0});
    return out;
}

TwoClusterSplit from_mask(const std::vector<bool>& high)
{
    TwoClusterSplit out;
    for (std::size_t i = 0; i < high.size(); ++i) (high[i] ? out.high : out.low).push_back(i);
    return out;
}

std::vector<std::size_t> threshold(std::span<const double> magnitude, const GdsOptions& options)
{
    switch (options.thresholding) {
    case Thresholding::kmeans: return kmeans_two_clusters(magnitude).high;
    case Thresholding::exact_two_means: return split_two_means(magnitude).high;
    case Thresholding::gamma: {
        const double cut = options.gamma_fraction * *std::max_element(magnitude.begin(), magnitude.end());
        std::vector<std::size_t> keep;
        for (std::size_t j = 0; j < magnitude.size(); ++j) {
            if (magnitude[j] > cut) keep.push_back(j);
        }
        return keep;
    }
    }
    return {};
}

ScreeningResult to_result(const ModelMatrix& matrix, const GdsFit& fit)
{
    ScreeningResult out;
    out.active_effects = fit.selected;
    out.important_factors = factors_of(fit.selected);
    out.final_fit = fit.refit;
    out.r_squared = r_squared(fit.refit, matrix);
    out.delta = fit.delta;
    return out;
}

} // namespace

double within_cluster_sse(std::span<const double> values, const TwoClusterSplit& split)
{
    auto sse = [&](const std::vector<std::size_t>& idx) {
        if (idx.empty()) return 0.0;
        double mean = 0.0;
        for (auto i : idx) mean += values[i];
        mean /= static_cast<double>(idx.size());
        double s = 0.0;
        for (auto i : idx) s += (values[i] - mean) * (values[i] - mean);
        return s;
    };
    return sse(split.low) + sse(split.high);
}

TwoClusterSplit split_two_means(std::span<const double> values)
{
    if (values.empty()) return {};
    if (all_equal(values)) return single_cluster(values);

    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) { return values[l] < values[r]; });

    std::vector<double> sum(n + 1, 0.0), sq(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double v = values[order[k]];
        sum[k + 1] = sum[k] + v;
        sq[k + 1] = sq[k] + v * v;
    }
    auto sse = [&](std::size_t from, std::size_t to) {
        const double cnt = static_cast<double>(to - from);
        const double s = sum[to] - sum[from];
        return std::max(0.0, (sq[to] - sq[from]) - s * s / cnt);
    };

    std::size_t best_split = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < n; ++k) {
        if (values[order[k - 1]] == values[order[k]]) continue; // never separate ties
        const double total = sse(0, k) + sse(k, n);
        if (total < best) {
            best = total;
            best_split = k;
        }
    }
    std::vector<bool> high(n, false);
    for (std::size_t k = best_split; k < n; ++k) high[order[k]] = true;
    return from_mask(high);
}

TwoClusterSplit kmeans_two_clusters(std::span<const double> values)
{
    if (values.empty()) return {};
    if (all_equal(values)) return single_cluster(values);

    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    std::vector<bool> high(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) high[i] = values[i] > mean;

    for (std::size_t iter = 0; iter < kMaxLloydIterations; ++iter) {
        double lo_sum = 0.0, hi_sum = 0.0;
        std::size_t lo_n = 0, hi_n = 0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (high[i]) {
                hi_sum += values[i];
                ++hi_n;
            } else {
                lo_sum += values[i];
                ++lo_n;
            }
        }
        if (lo_n == 0 || hi_n == 0) break;
        const double lo_c = lo_sum / static_cast<double>(lo_n);
        const double hi_c = hi_sum / static_cast<double>(hi_n);
        bool changed = false;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const bool h = std::abs(values[i] - hi_c) < std::abs(values[i] - lo_c);
            if (h != high[i]) {
                high[i] = h;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return from_mask(high);
}

GdsPath gds_path(const ModelMatrix& matrix, const GdsOptions& options)
{
    if (matrix.size() == 0) throw ValidationError("model has no effects");
    const auto grid = delta_grid(matrix);
    const auto solutions = dantzig_path(matrix, grid, options.lp);
    const std::size_t n = matrix.runs();

    GdsPath path;
    for (const auto& sol : solutions) {
        if (!sol.feasible) {
            path.failures.push_back("delta " + std::to_string(sol.delta) + ": LP " +
                                    std::string(to_string(sol.lp_status)));
            continue;
        }
        GdsFit fit;
        fit.delta = sol.delta;
        std::vector<double> magnitude(matrix.size());
        for (std::size_t j = 0; j < magnitude.size(); ++j) magnitude[j] = std::abs(sol.beta(static_cast<Eigen::Index>(j)));
        std::vector<std::size_t> keep;
        if (*std::max_element(magnitude.begin(), magnitude.end()) > 0.0) keep = threshold(magnitude, options);
        std::erase_if(keep, [&](std::size_t j) { return magnitude[j] == 0.0; });
        std::stable_sort(keep.begin(), keep.end(), [&](auto l, auto r) {
            if (magnitude[l] != magnitude[r]) return magnitude[l] > magnitude[r];
            return matrix.effects[l] < matrix.effects[r];
        });
        keep = full_rank_subset(matrix, keep, n - 1);
        std::sort(keep.begin(), keep.end(),
                  [&](auto l, auto r) { return matrix.effects[l] < matrix.effects[r]; });

        try {
            fit.refit = ols_fit(matrix, keep);
        } catch (const NumericalError& e) {
            path.failures.push_back("delta " + std::to_string(sol.delta) + ": " + e.what());
            continue;
        }
        fit.columns = keep;
        for (auto j : keep) {
            fit.selected.push_back(matrix.effects[j]);
            fit.estimates.push_back(sol.beta(static_cast<Eigen::Index>(j)));
        }
        fit.bic = bic(fit.refit.rss, n, keep.size());
        path.candidates.push_back(std::move(fit));
    }
    if (path.candidates.empty()) {
        std::string msg = "GDS failed for every delta:";
        for (const auto& f : path.failures) msg += " [" + f + "]";
        throw NumericalError(msg);
    }
    for (std::size_t k = 1; k < path.candidates.size(); ++k) {
        if (path.candidates[k].bic < path.candidates[path.best].bic) path.best = k;
    }
    return path;
}

GdsFit gds_run(const ModelMatrix& matrix, const GdsOptions& options)
{
    auto path = gds_path(matrix, options);
    return std::move(path.candidates[path.best]);
}

ScreeningResult gds_effects(const Design& design, std::span<const Effect> effects, std::span<const double> y,
                            const GdsOptions& options)
{
    const auto matrix = build_model_matrix(design, effects, y);
    if (matrix.y.squaredNorm() == 0.0) {
        ScreeningResult empty;
        empty.final_fit = ols_fit(matrix, std::span<const std::size_t>{});
        return empty;
    }
    return to_result(matrix, gds_run(matrix, options));
}

ScreeningResult gds_main_effects(const Design& design, std::span<const double> y, const GdsOptions& options)
{
    const auto effects = main_effects(design.factors());
    return gds_effects(design, effects, y, options);
}

ScreeningResult gds_all_2fi(const Design& design, std::span<const double> y, const GdsOptions& options)
{
    const auto effects = all_effects(design.factors());
    return gds_effects(design, effects, y, options);
}

} // namespace gdsarm
