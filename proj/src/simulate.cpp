#include "gdsarm/simulate.hpp"

#include <algorithm>
#include <numeric>

#include "gdsarm/error.hpp"
#include "gdsarm/parallel.hpp"

namespace gdsarm {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Partial Fisher-Yates: the first k entries of a uniform random permutation.
std::vector<std::size_t> draw_distinct(std::mt19937_64& rng, std::size_t pool, std::size_t k)
{
    std::vector<std::size_t> idx(pool);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(k);
    return idx;
}

double signed_draw(std::mt19937_64& rng, double mean, double sd)
{
    std::normal_distribution<double> magnitude(mean, sd);
    std::bernoulli_distribution negative(0.5);
    const double v = magnitude(rng);
    return negative(rng) ? -v : v;
}

} // namespace

Scenario standard_scenario(std::string_view id)
{
    static constexpr std::size_t table[7][2] = {{3, 0}, {4, 0}, {5, 0}, {3, 1}, {4, 1}, {3, 2}, {4, 2}};
    if (id.size() == 2 && id[0] == 'S' && id[1] >= '1' && id[1] <= '7') {
        const auto k = static_cast<std::size_t>(id[1] - '1');
        Scenario s;
        s.id = std::string(id);
        s.c1 = table[k][0];
        s.c2 = table[k][1];
        return s;
    }
    throw ValidationError("unknown scenario '" + std::string(id) + "' (expected S1..S7)");
}

std::vector<Scenario> standard_scenarios()
{
    std::vector<Scenario> out;
    for (const char* id : {"S1", "S2", "S3", "S4", "S5", "S6", "S7"}) out.push_back(standard_scenario(id));
    return out;
}

TrueModel generate_truth(std::mt19937_64& rng, const Scenario& scenario, std::size_t m)
{
    if (scenario.c1 > m) throw ValidationError("scenario has more active main effects than factors");
    TrueModel truth;
    auto mains = draw_distinct(rng, m, scenario.c1);
    std::sort(mains.begin(), mains.end());
    for (auto f : mains) truth.effects.push_back(Effect::main(static_cast<int>(f)));

    std::vector<Effect> legal;
    const auto active = [&](int f) { return std::binary_search(mains.begin(), mains.end(), static_cast<std::size_t>(f)); };
    for (const auto& e : all_interactions(m)) {
        const bool a = active(e.first());
        const bool b = active(e.second());
        const bool ok = scenario.truth_heredity == Heredity::none   ? true
                        : scenario.truth_heredity == Heredity::weak ? (a || b)
                                                                    : (a && b);
        if (ok) legal.push_back(e);
    }
    if (legal.size() < scenario.c2) {
        throw ValidationError("only " + std::to_string(legal.size()) + " interactions satisfy " +
                              std::string(to_string(scenario.truth_heredity)) + " heredity, " +
                              std::to_string(scenario.c2) + " requested");
    }
    auto picks = draw_distinct(rng, legal.size(), scenario.c2);
    std::sort(picks.begin(), picks.end());
    for (auto k : picks) truth.effects.push_back(legal[k]);

    for (std::size_t k = 0; k < truth.effects.size(); ++k) {
        truth.coefficients.push_back(signed_draw(rng, scenario.effect_mean, scenario.effect_sd));
    }
    truth.intercept = signed_draw(rng, scenario.effect_mean, scenario.effect_sd);
    truth.important_factors = factors_of(truth.effects);
    return truth;
}

std::vector<double> generate_response(const Design& design, const TrueModel& truth, double noise_sd,
                                      std::mt19937_64& rng)
{
    Eigen::VectorXd mean = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(design.runs()), truth.intercept);
    for (std::size_t k = 0; k < truth.effects.size(); ++k) {
        mean += truth.coefficients[k] * raw_column(design, truth.effects[k]);
    }
    std::vector<double> y(design.runs());
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = mean(static_cast<Eigen::Index>(i)) + noise_sd * noise(rng);
    return y;
}

PowerError power_error(std::span<const int> declared, std::span<const int> important, std::size_t m)
{
    std::vector<int> d(declared.begin(), declared.end());
    std::vector<int> imp(important.begin(), important.end());
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    std::sort(imp.begin(), imp.end());
    imp.erase(std::unique(imp.begin(), imp.end()), imp.end());
    for (int f : d) {
        if (f < 0 || static_cast<std::size_t>(f) >= m) throw ValidationError("declared factor out of range");
    }
    std::vector<int> hit;
    std::set_intersection(d.begin(), d.end(), imp.begin(), imp.end(), std::back_inserter(hit));
    PowerError out;
    out.power = imp.empty() ? 1.0 : static_cast<double>(hit.size()) / static_cast<double>(imp.size());
    const std::size_t inactive = m - imp.size();
    out.error = inactive == 0 ? 0.0 : static_cast<double>(d.size() - hit.size()) / static_cast<double>(inactive);
    return out;
}

std::string Method::name() const
{
    switch (kind) {
    case MethodKind::gds_m: return "gds-m";
    case MethodKind::gds_m2fi: return "gds-m2fi";
    case MethodKind::gds_arm:
        return heredity == Heredity::none ? "gds-arm" : "gds-arm-" + std::string(to_string(heredity));
    }
    return "unknown";
}

Method parse_method(std::string_view text)
{
    Method m;
    if (text == "gds-m") {
        m.kind = MethodKind::gds_m;
    } else if (text == "gds-m2fi") {
        m.kind = MethodKind::gds_m2fi;
    } else if (text == "gds-arm") {
        m.kind = MethodKind::gds_arm;
    } else if (text == "gds-arm-weak") {
        m.kind = MethodKind::gds_arm;
        m.heredity = Heredity::weak;
    } else if (text == "gds-arm-strong") {
        m.kind = MethodKind::gds_arm;
        m.heredity = Heredity::strong;
    } else {
        throw ValidationError("unknown method '" + std::string(text) +
                              "' (expected gds-m, gds-m2fi, gds-arm, gds-arm-weak, gds-arm-strong)");
    }
    return m;
}

std::vector<int> screen(const Design& design, std::span<const double> y, const Method& method, std::uint64_t seed)
{
    switch (method.kind) {
    case MethodKind::gds_m: return gds_main_effects(design, y).important_factors;
    case MethodKind::gds_m2fi: return gds_all_2fi(design, y).important_factors;
    case MethodKind::gds_arm: {
        auto cfg = method.arm ? *method.arm : default_config(design.runs(), design.factors(), seed);
        cfg.seed = seed;
        cfg.heredity = method.heredity;
        return gds_arm(design, y, cfg).important_factors;
    }
    }
    return {};
}

std::uint64_t iteration_seed(std::uint64_t master_seed, std::string_view scenario_id, std::size_t t)
{
    std::uint64_t h = splitmix64(master_seed);
    for (unsigned char ch : scenario_id) h = splitmix64(h ^ ch);
    return splitmix64(h ^ static_cast<std::uint64_t>(t));
}

SimReportEntry run_scenario(const Design& design, const Scenario& scenario, const Method& method,
                            std::size_t iterations, std::uint64_t master_seed)
{
    if (iterations == 0) throw ValidationError("iterations must be at least 1");
    const std::size_t m = design.factors();
    SimReportEntry entry;
    entry.scenario = scenario.id;
    entry.method = method.name();
    entry.seed = master_seed;
    entry.outcomes.resize(iterations);

    parallel_for(iterations, [&](std::size_t t) {
        const auto seed = iteration_seed(master_seed, scenario.id, t);
        auto& out = entry.outcomes[t];
        try {
            std::mt19937_64 rng(seed);
            const auto truth = generate_truth(rng, scenario, m);
            const auto y = generate_response(design, truth, scenario.noise_sd, rng);
            const auto declared = screen(design, y, method, splitmix64(seed ^ 0xA5A5A5A5A5A5A5A5ull));
            out.score = power_error(declared, truth.important_factors, m);
            out.ok = true;
        } catch (const std::exception& e) {
            out.failure = e.what();
        }
    });

    double power = 0.0, error = 0.0;
    for (const auto& o : entry.outcomes) {
        if (!o.ok) {
            ++entry.failures;
            continue;
        }
        power += o.score.power;
        error += o.score.error;
        ++entry.iterations;
    }
    if (entry.iterations > 0) {
        entry.power = power / static_cast<double>(entry.iterations);
        entry.error = error / static_cast<double>(entry.iterations);
    }
    return entry;
}

} // namespace gdsarm
