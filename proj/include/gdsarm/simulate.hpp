#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gdsarm/design.hpp"
#include "gdsarm/gdsarm.hpp"

namespace gdsarm {

/// One simulation setting: c1 active main effects and c2 active interactions.
struct Scenario {
    std::string id;
    std::size_t c1 = 0;
    std::size_t c2 = 0;
    double effect_mean = 5.0;
    double effect_sd = 1.0;
    double noise_sd = 1.0;
    Heredity truth_heredity = Heredity::weak;
};

/// S1..S7: (c1, c2) = (3,0) (4,0) (5,0) (3,1) (4,1) (3,2) (4,2).
Scenario standard_scenario(std::string_view id);
std::vector<Scenario> standard_scenarios();

struct TrueModel {
    std::vector<Effect> effects; // mains first, then interactions
    std::vector<double> coefficients;
    double intercept = 0.0;
    std::vector<int> important_factors;
};

/// Draws the active effects and their coefficients.  Magnitudes (intercept
/// included) are N(effect_mean, effect_sd^2) with an independent random sign;
/// interactions are drawn uniformly from the pairs allowed by truth_heredity.
TrueModel generate_truth(std::mt19937_64& rng, const Scenario& scenario, std::size_t m);

/// y = intercept + sum coef * raw column + N(0, noise_sd^2) noise.
std::vector<double> generate_response(const Design& design, const TrueModel& truth, double noise_sd,
                                      std::mt19937_64& rng);

struct PowerError {
    double power = 0.0;
    double error = 0.0;
};

/// power = |declared ∩ important| / |important| (1 when nothing is important);
/// error = |declared \ important| / (m - |important|).
PowerError power_error(std::span<const int> declared, std::span<const int> important, std::size_t m);

enum class MethodKind { gds_m, gds_m2fi, gds_arm };

struct Method {
    MethodKind kind = MethodKind::gds_arm;
    /// GDS-ARM tuning; default_config(n, m, .) when empty.  The seed is
    /// replaced by one derived from each iteration seed.
    std::optional<GdsArmConfig> arm;
    Heredity heredity = Heredity::none;

    std::string name() const;
};

Method parse_method(std::string_view text);

/// Runs a screening method on one data set and returns its important factors.
std::vector<int> screen(const Design& design, std::span<const double> y, const Method& method, std::uint64_t seed);

struct IterationOutcome {
    bool ok = false;
    PowerError score;
    std::string failure;
};

struct SimReportEntry {
    std::string scenario;
    std::string method;
    double power = 0.0;
    double error = 0.0;
    std::size_t iterations = 0; // successful iterations included in the means
    std::size_t failures = 0;
    std::uint64_t seed = 0;
    std::vector<IterationOutcome> outcomes;
};

/// Seed of iteration t of a scenario; independent of execution order.
std::uint64_t iteration_seed(std::uint64_t master_seed, std::string_view scenario_id, std::size_t t);

SimReportEntry run_scenario(const Design& design, const Scenario& scenario, const Method& method,
                            std::size_t iterations, std::uint64_t master_seed);

} // namespace gdsarm
