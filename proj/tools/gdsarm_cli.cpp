// Command-line front end: analyze, simulate, make-pb12.
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gdsarm/error.hpp"
#include "gdsarm/gdsarm.hpp"
#include "gdsarm/io.hpp"
#include "gdsarm/simulate.hpp"

using namespace gdsarm;

namespace {

struct TuningFlags {
    std::optional<std::size_t> nrep, nint, ntop;
    std::optional<double> pkeep, p_enter, p_remove;
    std::string heredity = "none";
    std::string clustering = "kmeans";
};

void add_tuning(CLI::App* cmd, TuningFlags& t)
{
    cmd->add_option("--nrep", t.nrep, "GDS-ARM repetitions");
    cmd->add_option("--nint", t.nint, "random interactions per repetition");
    cmd->add_option("--ntop", t.ntop, "best-BIC repetitions aggregated");
    cmd->add_option("--pkeep", t.pkeep, "share of top models an effect must appear in");
    cmd->add_option("--heredity", t.heredity, "heredity filter")->check(CLI::IsMember({"none", "weak", "strong"}));
    cmd->add_option("--p-enter", t.p_enter, "stepwise entry threshold");
    cmd->add_option("--p-remove", t.p_remove, "stepwise removal threshold");
    cmd->add_option("--clustering", t.clustering, "thresholding of the Dantzig estimate")
        ->check(CLI::IsMember({"kmeans", "exact", "gamma"}));
}

GdsOptions gds_options(const TuningFlags& t)
{
    GdsOptions o;
    if (t.clustering == "exact") o.thresholding = Thresholding::exact_two_means;
    if (t.clustering == "gamma") o.thresholding = Thresholding::gamma;
    return o;
}

/// Defaults for the design size with any explicit overrides applied.
GdsArmConfig arm_config(const TuningFlags& t, std::size_t n, std::size_t m, std::uint64_t seed)
{
    GdsArmConfig c;
    if (m >= 3 && n >= 3) c = default_config(n, m, seed);
    if (t.nrep) c.nrep = *t.nrep;
    if (t.nint) c.nint = *t.nint;
    if (t.ntop) c.ntop = *t.ntop;
    if (t.pkeep) c.pkeep = *t.pkeep;
    if (t.p_enter) c.stepwise.p_enter = *t.p_enter;
    if (t.p_remove) c.stepwise.p_remove = *t.p_remove;
    c.heredity = parse_heredity(t.heredity);
    c.gds = gds_options(t);
    c.seed = seed;
    c.validate(m);
    return c;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed)
{
    if (seed) return *seed;
    const auto s = static_cast<std::uint64_t>(std::chrono::system_clock::now().time_since_epoch().count());
    std::cerr << "seed: " << s << "\n";
    return s;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) {
        const auto a = item.find_first_not_of(' ');
        if (a == std::string::npos) continue;
        out.push_back(item.substr(a, item.find_last_not_of(' ') - a + 1));
    }
    return out;
}

/// Writes to --out when given, stdout otherwise.  The file is opened up front
/// so an unwritable path fails before any work is done.
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (path.empty()) return;
        file_.open(path, std::ios::binary);
        if (!file_) throw ValidationError("cannot write " + path);
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Screening of supersaturated designs with the Gauss-Dantzig selector and GDS-ARM"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "screen a design and response");
    std::string design_path, response_path, method = "gds-arm", format = "human", out_path, compare;
    std::optional<std::uint64_t> seed;
    bool zero_one = false;
    TuningFlags tuning;
    analyze->add_option("design", design_path, "design CSV")->required();
    analyze->add_option("response", response_path, "response CSV")->required();
    analyze->add_option("--method", method)->check(CLI::IsMember({"gds-m", "gds-m2fi", "gds-arm"}));
    analyze->add_option("--seed", seed, "GDS-ARM seed (clock-derived and printed when omitted)");
    analyze->add_option("--format", format)->check(CLI::IsMember({"human", "json", "csv"}));
    analyze->add_option("--out", out_path, "output file");
    analyze->add_option("--compare-models", compare,
                        "effect sets to fit and report, e.g. \"D,F;F,FG;F,FG,AE\"");
    analyze->add_flag("--zero-one", zero_one, "design is coded 0/1");
    add_tuning(analyze, tuning);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "power and error over simulated responses");
    std::string sim_design, scenarios = "S1,S2,S3,S4,S5,S6,S7", methods = "gds-m,gds-m2fi,gds-arm", sim_out;
    std::string truth_heredity = "weak";
    std::size_t iterations = 1000;
    double effect_mean = 5.0;
    std::optional<std::uint64_t> sim_seed;
    bool sim_zero_one = false;
    TuningFlags sim_tuning;
    simulate->add_option("design", sim_design, "design CSV")->required();
    simulate->add_option("--scenarios", scenarios, "comma-separated scenario ids");
    simulate->add_option("--methods", methods, "comma-separated methods");
    simulate->add_option("--iterations", iterations);
    simulate->add_option("--seed", sim_seed, "master seed (clock-derived and printed when omitted)");
    simulate->add_option("--out", sim_out, "output CSV");
    simulate->add_option("--truth-heredity", truth_heredity)->check(CLI::IsMember({"none", "weak", "strong"}));
    simulate->add_option("--effect-mean", effect_mean, "mean magnitude of active coefficients");
    simulate->add_flag("--zero-one", sim_zero_one, "design is coded 0/1");
    add_tuning(simulate, sim_tuning);

    // make-pb12
    auto* pb12 = app.add_subcommand("make-pb12", "write the 12-run Plackett-Burman design");
    std::size_t pb_factors = 11;
    std::string pb_out;
    pb12->add_option("--factors", pb_factors, "number of columns (2..11)");
    pb12->add_option("--out", pb_out, "output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*analyze) {
            Output out(out_path);
            const auto design = load_design_csv(design_path, {zero_one});
            const auto y = load_response_csv(response_path, design.runs());
            AnalysisReport report;
            report.method = method;
            if (method == "gds-m") {
                report.result = gds_main_effects(design, y, gds_options(tuning));
            } else if (method == "gds-m2fi") {
                report.result = gds_all_2fi(design, y, gds_options(tuning));
            } else {
                report.seed = resolve_seed(seed);
                report.config = arm_config(tuning, design.runs(), design.factors(), *report.seed);
                report.result = gds_arm(design, y, *report.config);
            }
            for (const auto& group : split(compare, ';')) {
                std::vector<Effect> effects;
                for (const auto& label : split(group, ',')) effects.push_back(parse_effect_label(label, design.factor_names()));
                report.comparisons.push_back(compare_model(design, y, effects));
            }
            if (format == "json") {
                out.stream() << to_json(report, design).dump(2) << "\n";
            } else if (format == "csv") {
                write_csv(out.stream(), report, design);
            } else {
                write_human(out.stream(), report, design);
            }
        } else if (*simulate) {
            if (iterations == 0) throw ValidationError("iterations must be at least 1");
            Output out(sim_out);
            const auto design = load_design_csv(sim_design, {sim_zero_one});
            const auto master = resolve_seed(sim_seed);
            std::vector<Scenario> scs;
            for (const auto& id : split(scenarios, ',')) {
                auto s = standard_scenario(id);
                s.effect_mean = effect_mean;
                s.truth_heredity = parse_heredity(truth_heredity);
                scs.push_back(s);
            }
            std::vector<Method> ms;
            for (const auto& name : split(methods, ',')) {
                auto m = parse_method(name);
                if (m.kind == MethodKind::gds_arm) {
                    if (sim_tuning.heredity != "none") m.heredity = parse_heredity(sim_tuning.heredity);
                    auto cfg = arm_config(sim_tuning, design.runs(), design.factors(), 0);
                    cfg.heredity = m.heredity;
                    m.arm = cfg;
                }
                ms.push_back(m);
            }
            std::vector<SimReportEntry> rows;
            for (const auto& s : scs) {
                for (const auto& m : ms) {
                    auto row = run_scenario(design, s, m, iterations, master);
                    if (row.failures > 0) {
                        std::cerr << "warning: " << s.id << " " << row.method << ": " << row.failures
                                  << " failed iterations\n";
                    }
                    rows.push_back(std::move(row));
                }
            }
            write_simulation_csv(out.stream(), rows);
        } else if (*pb12) {
            Output out(pb_out);
            write_design_csv(out.stream(), make_pb12(pb_factors));
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
