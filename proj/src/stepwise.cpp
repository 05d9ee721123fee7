#include "gdsarm/stepwise.hpp"

#include <algorithm>

#include "gdsarm/error.hpp"
#include "gdsarm/linreg.hpp"

namespace gdsarm {

void StepwiseConfig::validate() const
{
    if (!(p_enter > 0.0 && p_enter <= p_remove && p_remove < 1.0)) {
        throw ValidationError("stepwise thresholds must satisfy 0 < p_enter <= p_remove < 1");
    }
    if (max_steps == 0) throw ValidationError("stepwise max_steps must be positive");
}

namespace {

std::vector<std::size_t> locate(const ModelMatrix& matrix, std::span<const Effect> effects)
{
    std::vector<std::size_t> out;
    out.reserve(effects.size());
    for (const auto& e : effects) {
        const auto idx = matrix.index_of(e);
        if (idx < 0) throw ValidationError("stepwise effect is not a column of the model matrix");
        out.push_back(static_cast<std::size_t>(idx));
    }
    return out;
}

} // namespace

StepwiseResult stepwise_regress(const ModelMatrix& matrix, std::span<const Effect> initial,
                                std::span<const Effect> candidates, const StepwiseConfig& config)
{
    config.validate();
    const std::size_t n = matrix.runs();
    const std::size_t cap = n >= 2 ? n - 2 : 0;
    const auto canonical = [&](std::size_t l, std::size_t r) { return matrix.effects[l] < matrix.effects[r]; };

    auto pool = locate(matrix, candidates);
    auto start = locate(matrix, initial);
    pool.insert(pool.end(), start.begin(), start.end());
    std::sort(pool.begin(), pool.end(), canonical);
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    std::erase_if(pool, [&](std::size_t c) { return matrix.is_degenerate(c); });

    std::sort(start.begin(), start.end(), canonical);
    start.erase(std::unique(start.begin(), start.end()), start.end());
    auto model = full_rank_subset(matrix, start, cap);
    std::sort(model.begin(), model.end(), canonical);

    StepwiseResult result;
    bool changed = true;
    while (changed && result.steps < config.max_steps) {
        changed = false;
        ++result.steps;

        while (!model.empty()) {
            const auto fit = ols_fit(matrix, model);
            const auto p = coefficient_p_values(fit);
            std::size_t worst = 0;
            for (std::size_t j = 1; j < p.size(); ++j) {
                if (p[j] > p[worst]) worst = j;
            }
            if (p[worst] <= config.p_remove) break;
            model.erase(model.begin() + static_cast<std::ptrdiff_t>(worst));
            changed = true;
        }

        if (model.size() + 1 > cap) continue;
        std::size_t best = matrix.size();
        double best_p = 2.0;
        for (auto c : pool) {
            if (std::find(model.begin(), model.end(), c) != model.end()) continue;
            auto extended = model;
            extended.push_back(c);
            if (!has_full_rank(matrix, extended)) continue;
            const auto p = coefficient_p_values(ols_fit(matrix, extended));
            if (p.back() < best_p) {
                best_p = p.back();
                best = c;
            }
        }
        if (best < matrix.size() && best_p < config.p_enter) {
            model.insert(std::upper_bound(model.begin(), model.end(), best, canonical), best);
            changed = true;
        }
    }
    result.cycling = changed;
    for (auto c : model) result.effects.push_back(matrix.effects[c]);
    return result;
}

} // namespace gdsarm
