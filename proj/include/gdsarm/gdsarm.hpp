#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gdsarm/design.hpp"
#include "gdsarm/gds.hpp"
#include "gdsarm/stepwise.hpp"

namespace gdsarm {

enum class Heredity { none, weak, strong };

std::string_view to_string(Heredity h);
Heredity parse_heredity(std::string_view text);

/// Tuning of the aggregation-over-random-models procedure.
struct GdsArmConfig {
    std::size_t nrep = 1;   // number of GDS applications
    std::size_t nint = 1;   // random interactions per application
    std::size_t ntop = 1;   // best-BIC models kept for aggregation
    double pkeep = 0.25;    // minimum share of top models an effect must appear in
    Heredity heredity = Heredity::none;
    StepwiseConfig stepwise;
    std::uint64_t seed = 0;
    GdsOptions gds;

    /// Throws ValidationError when a field is out of range for m factors.
    void validate(std::size_t m) const;
};

/// Recommended tuning for m factors, with C = m(m-1)/2:
/// nrep = C, nint = ceil(0.2 C), ntop = max(20, round(nrep * nint / (2C))), pkeep = 0.25.
GdsArmConfig default_config(std::size_t n, std::size_t m, std::uint64_t seed);

/// nrep independent uniform draws of nint distinct interactions (canonical order
/// within each draw), all taken sequentially from one generator seeded by `seed`.
std::vector<std::vector<Effect>> sample_interaction_subsets(std::uint64_t seed, std::size_t nrep, std::size_t nint,
                                                            std::size_t m);

/// Drops interactions without a parent main effect in the set (weak) or
/// without both parents (strong).  Main effects are always kept.
std::vector<Effect> apply_heredity_filter(std::span<const Effect> effects, Heredity mode);

struct Aggregation {
    std::vector<Effect> retained;           // canonical order
    std::vector<EffectCount> counts;        // every effect seen in a top model
    std::vector<std::size_t> top;           // repetition indices, best first
    std::size_t threshold = 0;              // ceil(pkeep * ntop)
};

/// Ranks fits by BIC (ties by position), keeps the first ntop and retains the
/// effects that appear in at least ceil(pkeep * ntop) of them.
Aggregation aggregate_top_models(std::span<const GdsFit> fits, std::size_t ntop, double pkeep);

ScreeningResult gds_arm(const Design& design, std::span<const double> y, const GdsArmConfig& config);

} // namespace gdsarm
