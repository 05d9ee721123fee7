#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gdsarm {

/// A two-level design: n runs by m factors, every setting -1 or +1.
class Design {
public:
    Design(Eigen::MatrixXd settings, std::vector<std::string> factor_names = {});

    std::size_t runs() const { return static_cast<std::size_t>(settings_.rows()); }
    std::size_t factors() const { return static_cast<std::size_t>(settings_.cols()); }
    const Eigen::MatrixXd& settings() const { return settings_; }
    const std::vector<std::string>& factor_names() const { return names_; }

    bool operator==(const Design&) const = default;

private:
    Eigen::MatrixXd settings_;
    std::vector<std::string> names_;
};

/// "A".."Z" when m <= 26, otherwise "F1".."Fm".
std::vector<std::string> default_factor_names(std::size_t m);

/// A main effect (second < 0) or a two-factor interaction first < second.
///
/// The ordering puts every main effect before every interaction, then sorts
/// by factor indices.  This is the canonical order used for tie-breaking.
class Effect {
public:
    static Effect main(int factor);
    static Effect interaction(int a, int b);

    bool is_main() const { return second_ < 0; }
    bool is_interaction() const { return second_ >= 0; }
    int first() const { return first_; }
    int second() const { return second_; }
    bool involves(int factor) const { return first_ == factor || second_ == factor; }

    friend bool operator==(const Effect&, const Effect&) = default;
    friend std::strong_ordering operator<=>(const Effect& l, const Effect& r)
    {
        if (auto c = l.is_interaction() <=> r.is_interaction(); c != 0) return c;
        if (auto c = l.first_ <=> r.first_; c != 0) return c;
        return l.second_ <=> r.second_;
    }

private:
    Effect(int a, int b) : first_(a), second_(b) {}
    int first_ = 0;
    int second_ = -1;
};

std::vector<Effect> main_effects(std::size_t m);
std::vector<Effect> all_interactions(std::size_t m);
/// All m + m(m-1)/2 effects in canonical order.
std::vector<Effect> all_effects(std::size_t m);

/// Element-wise product of factor columns i and j of the raw settings.
Eigen::VectorXd interaction_column(const Design& design, int i, int j);

/// The raw (uncentered) +-1 column of an effect.
Eigen::VectorXd raw_column(const Design& design, const Effect& effect);

std::string effect_label(const Effect& effect, std::span<const std::string> names);
/// Inverse of effect_label: "F" -> main(F), "FG" -> interaction(F,G).
Effect parse_effect_label(const std::string& label, std::span<const std::string> names);
/// Comma-joined labels, e.g. "F, AE, FG".
std::string join_labels(std::span<const Effect> effects, std::span<const std::string> names);

/// Factor indices (sorted, unique) that appear in any of the effects.
std::vector<int> factors_of(std::span<const Effect> effects);

/// Centered response plus centered columns scaled to length sqrt(n-1).
struct ModelMatrix {
    Eigen::MatrixXd columns;
    std::vector<Effect> effects;
    Eigen::VectorXd y;
    double column_norm = 0.0;
    /// Columns that were constant before centering; stored as all zeros.
    std::vector<std::size_t> degenerate;

    std::size_t runs() const { return static_cast<std::size_t>(columns.rows()); }
    std::size_t size() const { return effects.size(); }
    bool is_degenerate(std::size_t column) const;
    /// Position of an effect, or -1 when absent.
    std::ptrdiff_t index_of(const Effect& effect) const;
};

ModelMatrix build_model_matrix(const Design& design, std::span<const Effect> effects,
                               std::span<const double> response);

/// Centers and scales already-formed raw columns; build_model_matrix forwards here.
ModelMatrix normalize_columns(const Eigen::MatrixXd& raw, std::vector<Effect> effects,
                              std::span<const double> response);

} // namespace gdsarm
