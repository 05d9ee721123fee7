#include "gdsarm/design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "gdsarm/error.hpp"

namespace gdsarm {

namespace {

constexpr double kCenterTolerance = 1e-10;

} // namespace

Design::Design(Eigen::MatrixXd settings, std::vector<std::string> factor_names)
    : settings_(std::move(settings)), names_(std::move(factor_names))
{
    if (settings_.rows() < 2 || settings_.cols() < 2) {
        throw ValidationError("design needs at least 2 runs and 2 factors");
    }
    for (Eigen::Index r = 0; r < settings_.rows(); ++r) {
        for (Eigen::Index c = 0; c < settings_.cols(); ++c) {
            const double v = settings_(r, c);
            if (v != 1.0 && v != -1.0) {
                throw ValidationError("design entry at run " + std::to_string(r + 1) + ", factor " +
                                      std::to_string(c + 1) + " is not -1 or +1");
            }
        }
    }
    if (names_.empty()) {
        names_ = default_factor_names(factors());
    }
    if (names_.size() != factors()) {
        throw ValidationError("expected " + std::to_string(factors()) + " factor names, got " +
                              std::to_string(names_.size()));
    }
    std::set<std::string> seen;
    for (const auto& name : names_) {
        if (name.empty()) throw ValidationError("empty factor name");
        if (!seen.insert(name).second) throw ValidationError("duplicate factor name '" + name + "'");
    }
}

std::vector<std::string> default_factor_names(std::size_t m)
{
    std::vector<std::string> names;
    names.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (m <= 26) {
            names.emplace_back(1, static_cast<char>('A' + k));
        } else {
            names.push_back("F" + std::to_string(k + 1));
        }
    }
    return names;
}

Effect Effect::main(int factor)
{
    if (factor < 0) throw ValidationError("negative factor index");
    return Effect(factor, -1);
}

Effect Effect::interaction(int a, int b)
{
    if (a < 0 || b < 0) throw ValidationError("negative factor index");
    if (a == b) throw ValidationError("self-interaction of factor " + std::to_string(a));
    return a < b ? Effect(a, b) : Effect(b, a);
}

std::vector<Effect> main_effects(std::size_t m)
{
    std::vector<Effect> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.push_back(Effect::main(static_cast<int>(i)));
    return out;
}

std::vector<Effect> all_interactions(std::size_t m)
{
    std::vector<Effect> out;
    out.reserve(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            out.push_back(Effect::interaction(static_cast<int>(i), static_cast<int>(j)));
        }
    }
    return out;
}

std::vector<Effect> all_effects(std::size_t m)
{
    auto out = main_effects(m);
    auto ints = all_interactions(m);
    out.insert(out.end(), ints.begin(), ints.end());
    return out;
}

Eigen::VectorXd interaction_column(const Design& design, int i, int j)
{
    const auto m = static_cast<int>(design.factors());
    if (i < 0 || j < 0 || i >= m || j >= m) {
        throw ValidationError("interaction index out of range");
    }
    if (i >= j) throw ValidationError("interaction indices must satisfy i < j");
    return design.settings().col(i).cwiseProduct(design.settings().col(j));
}

Eigen::VectorXd raw_column(const Design& design, const Effect& effect)
{
    if (effect.is_main()) {
        if (effect.first() >= static_cast<int>(design.factors())) {
            throw ValidationError("main effect index out of range");
        }
        return design.settings().col(effect.first());
    }
    return interaction_column(design, effect.first(), effect.second());
}

std::string effect_label(const Effect& effect, std::span<const std::string> names)
{
    const auto at = [&](int k) -> const std::string& {
        if (k < 0 || static_cast<std::size_t>(k) >= names.size()) {
            throw ValidationError("effect index out of range for factor names");
        }
        return names[static_cast<std::size_t>(k)];
    };
    if (effect.is_main()) return at(effect.first());
    return at(effect.first()) + at(effect.second());
}

Effect parse_effect_label(const std::string& label, std::span<const std::string> names)
{
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (label == names[i]) return Effect::main(static_cast<int>(i));
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!label.starts_with(names[i])) continue;
        const auto rest = label.substr(names[i].size());
        for (std::size_t j = 0; j < names.size(); ++j) {
            if (j != i && rest == names[j]) {
                return Effect::interaction(static_cast<int>(i), static_cast<int>(j));
            }
        }
    }
    throw ValidationError("unknown effect '" + label + "'");
}

std::string join_labels(std::span<const Effect> effects, std::span<const std::string> names)
{
    std::string out;
    for (const auto& e : effects) {
        if (!out.empty()) out += ", ";
        out += effect_label(e, names);
    }
    return out;
}

std::vector<int> factors_of(std::span<const Effect> effects)
{
    std::set<int> f;
    for (const auto& e : effects) {
        f.insert(e.first());
        if (e.is_interaction()) f.insert(e.second());
    }
    return {f.begin(), f.end()};
}

bool ModelMatrix::is_degenerate(std::size_t column) const
{
    return std::binary_search(degenerate.begin(), degenerate.end(), column);
}

std::ptrdiff_t ModelMatrix::index_of(const Effect& effect) const
{
    const auto it = std::find(effects.begin(), effects.end(), effect);
    return it == effects.end() ? -1 : std::distance(effects.begin(), it);
}

ModelMatrix normalize_columns(const Eigen::MatrixXd& raw, std::vector<Effect> effects,
                              std::span<const double> response)
{
    const auto n = static_cast<std::size_t>(raw.rows());
    if (response.size() != n) {
        throw ValidationError("response has " + std::to_string(response.size()) + " values but design has " +
                              std::to_string(n) + " runs");
    }
    if (effects.empty()) throw ValidationError("no effects given");
    if (static_cast<std::size_t>(raw.cols()) != effects.size()) {
        throw ValidationError("column count does not match effect count");
    }
    {
        auto sorted = effects;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw ValidationError("duplicate effect in model");
        }
    }

    ModelMatrix mm;
    mm.column_norm = std::sqrt(static_cast<double>(n) - 1.0);
    mm.columns = raw;
    for (Eigen::Index c = 0; c < raw.cols(); ++c) {
        auto col = mm.columns.col(c);
        col.array() -= col.mean();
        const double len = col.norm();
        const double scale = raw.col(c).cwiseAbs().maxCoeff();
        if (len <= kCenterTolerance * std::max(1.0, scale) * std::sqrt(static_cast<double>(n))) {
            col.setZero();
            mm.degenerate.push_back(static_cast<std::size_t>(c));
        } else {
            col *= mm.column_norm / len;
        }
    }
    mm.y = Eigen::Map<const Eigen::VectorXd>(response.data(), static_cast<Eigen::Index>(n));
    mm.y.array() -= mm.y.mean();
    mm.effects = std::move(effects);
    return mm;
}

ModelMatrix build_model_matrix(const Design& design, std::span<const Effect> effects,
                               std::span<const double> response)
{
    Eigen::MatrixXd raw(design.runs(), effects.size());
    for (std::size_t k = 0; k < effects.size(); ++k) {
        raw.col(static_cast<Eigen::Index>(k)) = raw_column(design, effects[k]);
    }
    return normalize_columns(raw, {effects.begin(), effects.end()}, response);
}

} // namespace gdsarm
