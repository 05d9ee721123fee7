// Acceptance checks, one PASS/FAIL/SKIP line per criterion.
//   acceptance <data-dir> <cli-binary> [criterion ...]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gdsarm/dantzig.hpp"
#include "gdsarm/gds.hpp"
#include "gdsarm/gdsarm.hpp"
#include "gdsarm/io.hpp"
#include "gdsarm/simplex.hpp"
#include "gdsarm/simulate.hpp"
#include "oracles.hpp"

using namespace gdsarm;
namespace fs = std::filesystem;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
    Verdict verdict = Verdict::fail;
    std::string detail;
};

fs::path data_dir;
std::string cli;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<std::string> names_of(const std::vector<Effect>& e, const Design& d)
{
    std::vector<std::string> out;
    for (const auto& x : e) out.push_back(effect_label(x, d.factor_names()));
    return out;
}

std::string joined(const std::vector<std::string>& v)
{
    std::string s = "{";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + v[k];
    return s + "}";
}

std::vector<std::string> factor_names(const std::vector<int>& f, const Design& d)
{
    std::vector<std::string> out;
    for (int k : f) out.push_back(d.factor_names()[static_cast<std::size_t>(k)]);
    return out;
}

// ---------------------------------------------------------------------------

Outcome dantzig_vs_oracle()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    std::normal_distribution<double> z;
    const std::size_t sizes[] = {8, 12, 16};
    const double fractions[] = {0.02, 0.15, 0.35, 0.6, 0.9};
    double worst = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = sizes[rep % 3];
        std::uniform_int_distribution<std::size_t> pd(2, n - 1);
        const auto d = oracle::random_orthogonal_design(rng, n, pd(rng));
        std::vector<double> y(n);
        for (auto& v : y) v = 3 * z(rng);
        const auto mm = build_model_matrix(d, main_effects(d.factors()), y);
        const double top = (mm.columns.transpose() * mm.y).cwiseAbs().maxCoeff();
        for (double f : fractions) {
            const auto s = dantzig_select(mm, f * top);
            if (!s.ok()) return {Verdict::fail, "solver status " + std::string(to_string(s.lp_status))};
            worst = std::max(worst, (s.beta - orthogonal_dantzig_oracle(mm, f * top)).cwiseAbs().maxCoeff());
        }
    }
    const double secs = seconds_since(t0);
    const bool ok = worst <= 1e-6 && secs < 10;
    return {ok ? Verdict::pass : Verdict::fail, "max deviation " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome lp_vs_vertices()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<std::size_t> size(1, 6);
    std::uniform_int_distribution<int> coef(-4, 4);
    double worst = 0;
    int solved = 0, infeasible = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t vars = size(rng), rows = size(rng);
        std::vector<double> c;
        oracle::Matrix a;
        std::vector<double> b;
        for (std::size_t j = 0; j < vars; ++j) c.push_back(coef(rng));
        for (std::size_t i = 0; i + 1 < rows; ++i) {
            std::vector<double> row;
            for (std::size_t j = 0; j < vars; ++j) row.push_back(coef(rng));
            a.push_back(row);
            b.push_back(coef(rng) + 1);
        }
        a.push_back(std::vector<double>(vars, 1.0)); // keeps the vertex set finite
        b.push_back(10);
        Eigen::MatrixXd am(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(vars));
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = 0; j < vars; ++j) am(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i][j];
        }
        const auto ref = oracle::vertex_enumeration(c, a, b);
        const auto r = lp_solve(c, am, b);
        if (!ref.feasible) {
            ++infeasible;
            if (r.status != LpStatus::infeasible) return {Verdict::fail, "missed an infeasible instance"};
            continue;
        }
        if (r.status != LpStatus::optimal) return {Verdict::fail, "status " + std::string(to_string(r.status))};
        worst = std::max(worst, std::abs(r.objective - ref.objective));
        ++solved;
    }
    const double secs = seconds_since(t0);
    const bool ok = worst <= 1e-6 && secs < 5;
    return {ok ? Verdict::pass : Verdict::fail, std::to_string(solved) + " optimal, " + std::to_string(infeasible) +
                                                    " infeasible, max gap " + fmt("%.2e", worst) + ", " +
                                                    fmt("%.2f", secs) + " s"};
}

Outcome two_means_exactness()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(303);
    std::uniform_int_distribution<std::size_t> len(1, 12);
    std::exponential_distribution<double> e(0.5);
    std::uniform_int_distribution<int> small(0, 3);
    double worst = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        std::vector<double> v(len(rng));
        for (auto& x : v) x = rep % 4 == 0 ? small(rng) : e(rng);
        const auto s = split_two_means(v);
        worst = std::max(worst, std::abs(within_cluster_sse(v, s) - oracle::best_two_partition_sse(v)));
    }
    const double secs = seconds_since(t0);
    const bool ok = worst <= 1e-9 && secs < 5;
    return {ok ? Verdict::pass : Verdict::fail, "max SSE gap " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome real_data(const std::string& stem, const std::vector<std::string>& want_m,
                  const std::vector<std::string>& want_2fi, const std::vector<std::string>& want_arm,
                  const std::function<GdsArmConfig(const Design&, std::uint64_t)>& arm_config,
                  const std::vector<std::string>& r2_model, double r2_target)
{
    const auto dpath = data_dir / (stem + "_design.csv");
    const auto ypath = data_dir / (stem + "_response.csv");
    if (!fs::exists(dpath) || !fs::exists(ypath)) return {Verdict::skip, "dataset " + stem + " not present"};
    const auto d = load_design_csv(dpath.string());
    const auto y = load_response_csv(ypath.string(), d.runs());

    bool ok = true;
    std::string detail;
    const auto m = names_of(gds_main_effects(d, y).active_effects, d);
    ok &= m == want_m;
    detail += "GDS(m) " + joined(m);
    const auto all = names_of(gds_all_2fi(d, y).active_effects, d);
    ok &= all == want_2fi;
    detail += ", GDS(m+2fi) " + joined(all);

    int hits = 0;
    std::map<std::string, int> seen;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto f = factor_names(gds_arm(d, y, arm_config(d, seed)).important_factors, d);
        hits += f == want_arm;
        ++seen[joined(f)];
    }
    ok &= hits >= 18;
    detail += ", GDS-ARM " + joined(want_arm) + " in " + std::to_string(hits) + "/20 seeds (";
    bool first = true;
    for (const auto& [k, v] : seen) {
        detail += (first ? "" : " ") + k + "x" + std::to_string(v);
        first = false;
    }
    detail += ")";

    if (!r2_model.empty()) {
        std::vector<Effect> e;
        for (const auto& l : r2_model) e.push_back(parse_effect_label(l, d.factor_names()));
        const double r2 = compare_model(d, y, e).r_squared;
        ok &= std::abs(100 * r2 - r2_target) <= 1;
        detail += ", R^2 " + joined(r2_model) + " = " + fmt("%.2f", 100 * r2) + "%";
    }
    return {ok ? Verdict::pass : Verdict::fail, detail};
}

// Shared simulation results: criterion 6 and 9 reuse the same runs.
std::map<std::string, SimReportEntry> sim_cache;
constexpr std::uint64_t kSimSeed = 20240917;
constexpr std::size_t kSimIterations = 200;

const SimReportEntry& simulated(const std::string& design_file, const Design& d, const std::string& scenario,
                                const std::string& method)
{
    const auto key = design_file + "|" + scenario + "|" + method;
    auto it = sim_cache.find(key);
    if (it == sim_cache.end()) {
        it = sim_cache.emplace(key, run_scenario(d, standard_scenario(scenario), parse_method(method), kSimIterations,
                                                 kSimSeed))
                 .first;
    }
    return it->second;
}

Outcome simulation_ordering()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto pb = load_design_csv((data_dir / "pb24_16.csv").string());
    const auto ess = load_design_csv((data_dir / "ess18_22.csv").string());
    bool ok = true;
    std::ostringstream detail;
    detail << "(a)";
    for (const char* s : {"S1", "S2", "S3"}) {
        const auto& arm = simulated("pb24", pb, s, "gds-arm");
        const auto& gm = simulated("pb24", pb, s, "gds-m");
        const bool good = arm.power >= gm.power - 0.02;
        ok &= good;
        detail << " " << s << " " << fmt("%.3f", arm.power) << "/" << fmt("%.3f", gm.power) << (good ? "" : "!");
    }
    detail << "; (b)";
    for (const char* s : {"S4", "S5", "S6", "S7"}) {
        const auto& arm = simulated("pb24", pb, s, "gds-arm");
        const auto& gm = simulated("pb24", pb, s, "gds-m");
        const double a = arm.power - arm.error, g = gm.power - gm.error;
        const bool good = a >= g + 0.05;
        ok &= good;
        detail << " " << s << " " << fmt("%.3f", a) << "/" << fmt("%.3f", g) << (good ? "" : "!");
    }
    double arm_sum = 0, fi_sum = 0;
    for (const auto& sc : standard_scenarios()) {
        arm_sum += simulated("ess", ess, sc.id, "gds-arm").power;
        fi_sum += simulated("ess", ess, sc.id, "gds-m2fi").power;
    }
    const bool c = fi_sum / 7 <= arm_sum / 7 - 0.10;
    ok &= c;
    detail << "; (c) mean power GDS(m+2fi) " << fmt("%.3f", fi_sum / 7) << " vs GDS-ARM " << fmt("%.3f", arm_sum / 7);
    const double secs = seconds_since(t0);
    ok &= secs <= 1800;
    detail << "; " << fmt("%.0f", secs) << " s";
    return {ok ? Verdict::pass : Verdict::fail, detail.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism()
{
    const auto dir = fs::temp_directory_path() / ("gdsarm_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const auto design = data_dir / "pb24_16.csv";
    const auto cf_design = (data_dir / "cast_fatigue_design.csv").string();
    const auto cf_response = (data_dir / "cast_fatigue_response.csv").string();
    struct Job {
        std::string name;
        std::string args;
    };
    const std::vector<Job> jobs{
        {"simulate", "simulate " + design.string() + " --scenarios S2,S5 --iterations 15 --seed 77"},
        {"analyze", "analyze " + cf_design + " " + cf_response + " --method gds-arm --seed 5 --format json"},
        {"analyze-csv", "analyze " + cf_design + " " + cf_response + " --method gds-arm --seed 9 --format csv"},
    };
    bool ok = true;
    std::string detail;
    for (const auto& job : jobs) {
        std::string outputs[2];
        int k = 0;
        for (const char* threads : {"1", "8"}) {
            const auto out = dir / (job.name + "_" + threads + ".out");
            const auto cmd = std::string("SCREENING_ARM_THREADS=") + threads + " " + cli + " " + job.args + " --out " +
                             out.string() + " 2>/dev/null";
            if (std::system(cmd.c_str()) != 0) {
                fs::remove_all(dir);
                return {Verdict::fail, job.name + " exited with an error"};
            }
            outputs[k++] = slurp(out);
        }
        const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
        ok &= same;
        detail += (detail.empty() ? "" : ", ") + job.name + (same ? " identical" : " differs");
    }
    fs::remove_all(dir);
    return {ok ? Verdict::pass : Verdict::fail, detail};
}

Outcome throughput()
{
    const auto d = load_design_csv((data_dir / "ess18_22.csv").string());
    std::mt19937_64 rng(808);
    const auto truth = generate_truth(rng, standard_scenario("S7"), d.factors());
    const auto y = generate_response(d, truth, 1.0, rng);
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = default_config(d.runs(), d.factors(), 1);
    gds_arm(d, y, cfg);
    const double secs = seconds_since(t0);
    return {secs <= 120 ? Verdict::pass : Verdict::fail,
            "nrep " + std::to_string(cfg.nrep) + ", nint " + std::to_string(cfg.nint) + ": " + fmt("%.2f", secs) + " s"};
}

Outcome heredity_variants()
{
    const auto pb = load_design_csv((data_dir / "pb24_16.csv").string());
    std::mt19937_64 rng(909);
    int violations = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto sc = standard_scenario(rep % 2 ? "S6" : "S7");
        const auto truth = generate_truth(rng, sc, pb.factors());
        const auto y = generate_response(pb, truth, 1.0, rng);
        for (auto h : {Heredity::weak, Heredity::strong}) {
            auto cfg = default_config(pb.runs(), pb.factors(), static_cast<std::uint64_t>(rep));
            cfg.heredity = h;
            const auto r = gds_arm(pb, y, cfg);
            std::set<int> mains;
            for (const auto& e : r.active_effects) {
                if (e.is_main()) mains.insert(e.first());
            }
            for (const auto& e : r.active_effects) {
                if (!e.is_interaction()) continue;
                const int parents = static_cast<int>(mains.count(e.first()) + mains.count(e.second()));
                violations += parents < (h == Heredity::weak ? 1 : 2);
            }
        }
    }
    bool ok = violations == 0;
    std::ostringstream detail;
    detail << violations << " heredity violations in 200 fits;";
    for (const auto& sc : standard_scenarios()) {
        const auto& plain = simulated("pb24", pb, sc.id, "gds-arm");
        const auto& weak = simulated("pb24", pb, sc.id, "gds-arm-weak");
        const bool good = weak.error <= plain.error + 0.02 && weak.power >= plain.power - 0.05;
        ok &= good;
        detail << " " << sc.id << " power " << fmt("%.3f", weak.power) << "/" << fmt("%.3f", plain.power) << " error "
               << fmt("%.3f", weak.error) << "/" << fmt("%.3f", plain.error) << (good ? "" : "!");
    }
    return {ok ? Verdict::pass : Verdict::fail, detail.str()};
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 3) {
        std::cerr << "usage: acceptance <data-dir> <cli-binary> [criterion ...]\n";
        return 2;
    }
    data_dir = argv[1];
    cli = argv[2];
    std::set<int> only;
    for (int k = 3; k < argc; ++k) only.insert(std::atoi(argv[k]));

    const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, dantzig_vs_oracle},
        {2, lp_vs_vertices},
        {3, two_means_exactness},
        {4,
         [] {
             return real_data(
                 "cast_fatigue", {"D", "F"}, {"F", "AE", "FG"}, {"A", "E", "F", "G"},
                 [](const Design& d, std::uint64_t seed) { return default_config(d.runs(), d.factors(), seed); },
                 {"F", "FG", "AE"}, 95.0);
         }},
        {5,
         [] {
             return real_data("chemical_composition", {"B", "D", "E", "F"}, {"A", "B", "D", "E", "G", "H"},
                              {"A", "C", "D"},
                              [](const Design& d, std::uint64_t seed) {
                                  auto c = default_config(d.runs(), d.factors(), seed);
                                  c.nrep = 28;
                                  c.nint = 6;
                                  c.ntop = 20;
                                  c.pkeep = 0.25;
                                  return c;
                              },
                              {}, 0.0);
         }},
        {6, simulation_ordering},
        {7, determinism},
        {8, throughput},
        {9, heredity_variants},
    };

    int failed = 0;
    for (const auto& [id, run] : criteria) {
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {Verdict::fail, std::string("exception: ") + e.what()};
        }
        const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::skip ? "SKIP" : "FAIL";
        std::cout << "criterion " << id << ": " << tag << "  " << o.detail << std::endl;
        failed += o.verdict == Verdict::fail;
    }
    return failed ? 1 : 0;
}
