#include "gdsarm/gdsarm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "gdsarm/error.hpp"
#include "gdsarm/linreg.hpp"
#include "gdsarm/parallel.hpp"

namespace gdsarm {

namespace {

std::size_t pair_count(std::size_t m) { return m * (m - 1) / 2; }

/// OLS refit of a GDS model after some effects were removed from it.
void refit_subset(const ModelMatrix& matrix, GdsFit& fit, std::span<const Effect> keep)
{
    if (keep.size() == fit.selected.size()) return;
    GdsFit out;
    out.delta = fit.delta;
    for (std::size_t k = 0; k < fit.selected.size(); ++k) {
        if (std::find(keep.begin(), keep.end(), fit.selected[k]) == keep.end()) continue;
        out.selected.push_back(fit.selected[k]);
        out.columns.push_back(fit.columns[k]);
        out.estimates.push_back(fit.estimates[k]);
    }
    out.refit = ols_fit(matrix, out.columns);
    out.bic = bic(out.refit.rss, matrix.runs(), out.columns.size());
    fit = std::move(out);
}

} // namespace

std::string_view to_string(Heredity h)
{
    switch (h) {
    case Heredity::none: return "none";
    case Heredity::weak: return "weak";
    case Heredity::strong: return "strong";
    }
    return "none";
}

Heredity parse_heredity(std::string_view text)
{
    if (text == "none") return Heredity::none;
    if (text == "weak") return Heredity::weak;
    if (text == "strong") return Heredity::strong;
    throw ValidationError("heredity must be one of none, weak, strong");
}

void GdsArmConfig::validate(std::size_t m) const
{
    if (m < 2) throw ValidationError("at least 2 factors are required");
    if (nrep == 0) throw ValidationError("nrep must be positive");
    if (nint > pair_count(m)) {
        throw ValidationError("nint must not exceed the " + std::to_string(pair_count(m)) + " available interactions");
    }
    if (ntop == 0 || ntop > nrep) throw ValidationError("ntop must be between 1 and nrep");
    if (!(pkeep > 0.0 && pkeep <= 1.0)) throw ValidationError("pkeep must lie in (0, 1]");
    stepwise.validate();
}

GdsArmConfig default_config(std::size_t n, std::size_t m, std::uint64_t seed)
{
    if (m < 3) throw ValidationError("default tuning needs at least 3 factors");
    if (n < 3) throw ValidationError("default tuning needs at least 3 runs");
    const std::size_t c = pair_count(m);
    GdsArmConfig cfg;
    cfg.nrep = c;
    // Integer form of ceil(0.2 C), exact for every C.
    cfg.nint = (c + 4) / 5;
    // Half-up rounding of nrep * nint / (2C).
    const std::size_t twice_c = 2 * c;
    const std::size_t suggested = (2 * cfg.nrep * cfg.nint + twice_c) / (2 * twice_c);
    cfg.ntop = std::min(cfg.nrep, std::max<std::size_t>(20, suggested));
    cfg.pkeep = 0.25;
    cfg.heredity = Heredity::none;
    cfg.seed = seed;
    return cfg;
}

std::vector<std::vector<Effect>> sample_interaction_subsets(std::uint64_t seed, std::size_t nrep, std::size_t nint,
                                                            std::size_t m)
{
    const auto pool = all_interactions(m);
    if (nint > pool.size()) throw ValidationError("nint exceeds the number of interactions");
    std::mt19937_64 rng(seed);
    std::vector<std::vector<Effect>> out;
    out.reserve(nrep);
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t r = 0; r < nrep; ++r) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t k = 0; k < nint; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, idx.size() - 1);
            std::swap(idx[k], idx[pick(rng)]);
        }
        std::vector<std::size_t> chosen(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(nint));
        std::sort(chosen.begin(), chosen.end());
        std::vector<Effect> subset;
        subset.reserve(nint);
        for (auto c : chosen) subset.push_back(pool[c]);
        out.push_back(std::move(subset));
    }
    return out;
}

std::vector<Effect> apply_heredity_filter(std::span<const Effect> effects, Heredity mode)
{
    std::vector<Effect> out(effects.begin(), effects.end());
    if (mode == Heredity::none) return out;
    auto has_main = [&](int f) {
        return std::find(effects.begin(), effects.end(), Effect::main(f)) != effects.end();
    };
    std::erase_if(out, [&](const Effect& e) {
        if (e.is_main()) return false;
        const bool a = has_main(e.first());
        const bool b = has_main(e.second());
        return mode == Heredity::weak ? !(a || b) : !(a && b);
    });
    return out;
}

Aggregation aggregate_top_models(std::span<const GdsFit> fits, std::size_t ntop, double pkeep)
{
    if (ntop == 0 || ntop > fits.size()) throw ValidationError("ntop must be between 1 and the number of fits");
    Aggregation agg;
    std::vector<std::size_t> order(fits.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) { return fits[l].bic < fits[r].bic; });
    agg.top.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(ntop));

    std::map<Effect, std::size_t> counts;
    for (auto r : agg.top) {
        for (const auto& e : fits[r].selected) ++counts[e];
    }
    agg.threshold = static_cast<std::size_t>(std::ceil(pkeep * static_cast<double>(ntop) - 1e-9));
    for (const auto& [effect, count] : counts) {
        agg.counts.push_back({effect, count});
        if (count >= agg.threshold) agg.retained.push_back(effect);
    }
    return agg;
}

ScreeningResult gds_arm(const Design& design, std::span<const double> y, const GdsArmConfig& config)
{
    const std::size_t m = design.factors();
    const std::size_t n = design.runs();
    config.validate(m);
    if (y.size() != n) throw ValidationError("response length does not match the design");

    ScreeningResult result;
    auto& diag = result.diagnostics;
    const double expected = static_cast<double>(config.nrep * config.nint) / static_cast<double>(pair_count(m));
    if (static_cast<double>(config.ntop) > expected) {
        std::ostringstream msg;
        msg << "ntop = " << config.ntop << " exceeds the expected number of repetitions containing a given"
            << " interaction (" << expected << ")";
        diag.warnings.push_back(msg.str());
    }

    {
        const auto probe = build_model_matrix(design, main_effects(m), y);
        if (probe.y.squaredNorm() == 0.0) {
            result.final_fit = ols_fit(probe, std::span<const std::size_t>{});
            return result;
        }
    }

    const auto subsets = sample_interaction_subsets(config.seed, config.nrep, config.nint, m);
    const auto mains = main_effects(m);
    std::vector<GdsFit> fits(config.nrep);
    std::vector<std::string> failures(config.nrep);
    parallel_for(config.nrep, [&](std::size_t r) {
        auto effects = mains;
        effects.insert(effects.end(), subsets[r].begin(), subsets[r].end());
        const auto matrix = build_model_matrix(design, effects, y);
        try {
            auto fit = gds_run(matrix, config.gds);
            if (config.heredity != Heredity::none) {
                refit_subset(matrix, fit, apply_heredity_filter(fit.selected, config.heredity));
            }
            fits[r] = std::move(fit);
        } catch (const std::exception& e) {
            fits[r] = GdsFit{};
            fits[r].bic = std::numeric_limits<double>::infinity();
            failures[r] = e.what();
        }
    });
    for (std::size_t r = 0; r < config.nrep; ++r) {
        diag.repetition_bic.push_back(fits[r].bic);
        if (!failures[r].empty()) {
            diag.warnings.push_back("repetition " + std::to_string(r + 1) + " failed: " + failures[r]);
        }
    }

    const auto agg = aggregate_top_models(fits, config.ntop, config.pkeep);
    diag.top_model_counts = agg.counts;
    diag.retention_threshold = agg.threshold;
    diag.aggregated = agg.retained;

    // Stepwise works on all main effects plus the retained interactions.
    auto effects = mains;
    for (const auto& e : agg.retained) {
        if (e.is_interaction()) effects.push_back(e);
    }
    const auto matrix = build_model_matrix(design, effects, y);

    auto count_of = [&](const Effect& e) {
        for (const auto& c : agg.counts) {
            if (c.effect == e) return c.count;
        }
        return std::size_t{0};
    };
    auto best_estimate = [&](const Effect& e) {
        for (auto r : agg.top) {
            const auto& f = fits[r];
            for (std::size_t k = 0; k < f.selected.size(); ++k) {
                if (f.selected[k] == e) return std::abs(f.estimates[k]);
            }
        }
        return 0.0;
    };
    std::vector<std::size_t> priority;
    for (const auto& e : agg.retained) priority.push_back(static_cast<std::size_t>(matrix.index_of(e)));
    std::stable_sort(priority.begin(), priority.end(), [&](auto l, auto r) {
        const auto& el = matrix.effects[l];
        const auto& er = matrix.effects[r];
        if (count_of(el) != count_of(er)) return count_of(el) > count_of(er);
        return best_estimate(el) > best_estimate(er);
    });
    const std::size_t cap = n >= 2 ? n - 2 : 0;
    const auto start_cols = full_rank_subset(matrix, priority, cap);
    if (start_cols.size() < agg.retained.size()) {
        diag.warnings.push_back("stepwise starts from " + std::to_string(start_cols.size()) + " of the " +
                                std::to_string(agg.retained.size()) + " aggregated effects");
    }
    std::vector<Effect> start;
    for (auto c : start_cols) start.push_back(matrix.effects[c]);
    std::sort(start.begin(), start.end());

    const auto step = stepwise_regress(matrix, start, effects, config.stepwise);
    if (step.cycling) diag.warnings.push_back("stepwise regression stopped at max_steps");

    result.active_effects = apply_heredity_filter(step.effects, config.heredity);
    result.important_factors = factors_of(result.active_effects);
    std::vector<std::size_t> final_cols;
    for (const auto& e : result.active_effects) final_cols.push_back(static_cast<std::size_t>(matrix.index_of(e)));
    result.final_fit = ols_fit(matrix, final_cols);
    result.r_squared = r_squared(result.final_fit, matrix);
    return result;
}

} // namespace gdsarm
