#include "gdsarm/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gdsarm/error.hpp"
#include "gdsarm/linreg.hpp"

namespace gdsarm {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? comma : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

/// Non-blank lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> content_lines(const std::string& text)
{
    std::vector<std::pair<std::size_t, std::string>> out;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!trim(line).empty()) out.emplace_back(number, line);
    }
    return out;
}

std::optional<double> parse_number(const std::string& token)
{
    if (token.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) return std::nullopt;
    return v;
}

bool is_setting_token(const std::string& token) { return token == "+" || token == "-" || parse_number(token); }

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_g(double v, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::vector<std::string> labels(std::span<const Effect> effects, const Design& design)
{
    std::vector<std::string> out;
    for (const auto& e : effects) out.push_back(effect_label(e, design.factor_names()));
    return out;
}

std::vector<std::string> factor_labels(std::span<const int> factors, const Design& design)
{
    std::vector<std::string> out;
    for (int f : factors) out.push_back(design.factor_names()[static_cast<std::size_t>(f)]);
    return out;
}

std::vector<double> safe_p_values(const OlsFit& fit)
{
    if (fit.size() == 0 || fit.df_resid == 0) return {};
    return coefficient_p_values(fit);
}

} // namespace

Design parse_design_csv(const std::string& text, const DesignCsvOptions& options)
{
    const auto lines = content_lines(text);
    if (lines.empty()) throw ValidationError("design file is empty");

    std::vector<std::string> names;
    std::size_t first = 0;
    {
        const auto tokens = split_commas(lines[0].second);
        bool header = false;
        for (const auto& t : tokens) header = header || !is_setting_token(t);
        if (header) {
            names = tokens;
            first = 1;
        }
    }
    if (first >= lines.size()) throw ValidationError("design file has a header but no runs");

    const std::size_t m = names.empty() ? split_commas(lines[first].second).size() : names.size();
    Eigen::MatrixXd settings(static_cast<Eigen::Index>(lines.size() - first), static_cast<Eigen::Index>(m));
    for (std::size_t r = first; r < lines.size(); ++r) {
        const auto& [number, line] = lines[r];
        const auto tokens = split_commas(line);
        if (tokens.size() != m) {
            throw ValidationError("design line " + std::to_string(number) + " has " + std::to_string(tokens.size()) +
                                  " cells, expected " + std::to_string(m));
        }
        for (std::size_t c = 0; c < m; ++c) {
            const auto& t = tokens[c];
            double v = 0.0;
            bool ok = false;
            if (t == "+" || t == "-") {
                v = t == "+" ? 1.0 : -1.0;
                ok = true;
            } else if (auto num = parse_number(t)) {
                if (options.zero_one) {
                    ok = *num == 0.0 || *num == 1.0;
                    v = *num == 0.0 ? -1.0 : 1.0;
                } else {
                    ok = *num == 1.0 || *num == -1.0;
                    v = *num;
                }
            }
            if (!ok) {
                throw ValidationError("design line " + std::to_string(number) + ", column " + std::to_string(c + 1) +
                                      ": invalid setting '" + t + "'" +
                                      (options.zero_one ? " (expected 0 or 1)" : " (expected -1 or +1)"));
            }
            settings(static_cast<Eigen::Index>(r - first), static_cast<Eigen::Index>(c)) = v;
        }
    }
    return Design(std::move(settings), std::move(names));
}

Design load_design_csv(const std::filesystem::path& path, const DesignCsvOptions& options)
{
    return parse_design_csv(read_file(path), options);
}

std::vector<double> parse_response_csv(const std::string& text, std::optional<std::size_t> n)
{
    const auto lines = content_lines(text);
    if (lines.empty()) throw ValidationError("response file is empty");

    std::vector<std::vector<std::string>> rows;
    for (const auto& [number, line] : lines) rows.push_back(split_commas(line));
    // A lone non-numeric first cell is a column header such as "y".
    if (rows.size() > 1 && rows[0].size() == 1 && !parse_number(rows[0][0])) rows.erase(rows.begin());

    std::vector<std::string> cells;
    if (rows.size() == 1) {
        cells = rows[0];
    } else {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != 1) {
                throw ValidationError("response must be a single column or a single row (line " +
                                      std::to_string(lines[lines.size() - rows.size() + r].first) + ")");
            }
            cells.push_back(rows[r][0]);
        }
    }

    std::vector<double> y;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto v = parse_number(cells[i]);
        if (!v) throw ValidationError("response value " + std::to_string(i + 1) + " is not a number: '" + cells[i] + "'");
        if (!std::isfinite(*v)) throw ValidationError("response value " + std::to_string(i + 1) + " is not finite");
        y.push_back(*v);
    }
    if (n && y.size() != *n) {
        throw ValidationError("response has " + std::to_string(y.size()) + " values but the design has " +
                              std::to_string(*n) + " runs");
    }
    return y;
}

std::vector<double> load_response_csv(const std::filesystem::path& path, std::optional<std::size_t> n)
{
    return parse_response_csv(read_file(path), n);
}

void write_design_csv(std::ostream& out, const Design& design)
{
    const auto& names = design.factor_names();
    for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
    out << '\n';
    for (Eigen::Index r = 0; r < design.settings().rows(); ++r) {
        for (Eigen::Index c = 0; c < design.settings().cols(); ++c) {
            out << (c ? "," : "") << (design.settings()(r, c) > 0 ? "1" : "-1");
        }
        out << '\n';
    }
}

Design make_pb12(std::size_t m)
{
    if (m < 2 || m > 11) throw ValidationError("a 12-run Plackett-Burman design has 2 to 11 columns");
    static constexpr char generator[] = "++-+++---+-";
    Eigen::MatrixXd s(12, static_cast<Eigen::Index>(m));
    for (Eigen::Index r = 0; r < 11; ++r) {
        for (Eigen::Index c = 0; c < s.cols(); ++c) s(r, c) = generator[(r + c) % 11] == '+' ? 1.0 : -1.0;
    }
    s.row(11).setConstant(-1.0);
    return Design(std::move(s));
}

ModelComparison compare_model(const Design& design, std::span<const double> y, std::span<const Effect> effects)
{
    const auto matrix = build_model_matrix(design, effects, y);
    std::vector<std::size_t> cols(effects.size());
    for (std::size_t k = 0; k < cols.size(); ++k) cols[k] = k;
    const auto fit = ols_fit(matrix, cols);
    ModelComparison out;
    out.effects.assign(effects.begin(), effects.end());
    out.r_squared = r_squared(fit, matrix);
    out.bic = bic(fit.rss, matrix.runs(), cols.size());
    return out;
}

nlohmann::json to_json(const AnalysisReport& report, const Design& design)
{
    using nlohmann::json;
    const auto& res = report.result;
    json j;
    j["method"] = report.method;
    j["runs"] = design.runs();
    j["factors"] = design.factor_names();
    j["seed"] = report.seed ? json(*report.seed) : json(nullptr);
    if (report.config) {
        const auto& c = *report.config;
        j["config"] = {{"nrep", c.nrep},
                       {"nint", c.nint},
                       {"ntop", c.ntop},
                       {"pkeep", c.pkeep},
                       {"heredity", std::string(to_string(c.heredity))},
                       {"p_enter", c.stepwise.p_enter},
                       {"p_remove", c.stepwise.p_remove}};
    } else {
        j["config"] = nullptr;
    }
    j["active_effects"] = labels(res.active_effects, design);
    j["important_factors"] = factor_labels(res.important_factors, design);
    j["r_squared"] = res.r_squared;
    j["delta"] = res.delta ? json(*res.delta) : json(nullptr);

    const auto p = safe_p_values(res.final_fit);
    json coefs = json::array();
    for (std::size_t k = 0; k < res.final_fit.size(); ++k) {
        coefs.push_back({{"effect", effect_label(res.final_fit.effects[k], design.factor_names())},
                         {"estimate", res.final_fit.coefficients(static_cast<Eigen::Index>(k))},
                         {"p_value", p.empty() ? json(nullptr) : json(p[k])}});
    }
    j["coefficients"] = coefs;

    const auto& d = res.diagnostics;
    json counts = json::array();
    for (const auto& c : d.top_model_counts) {
        counts.push_back({{"effect", effect_label(c.effect, design.factor_names())}, {"count", c.count}});
    }
    json bics = json::array();
    for (double b : d.repetition_bic) bics.push_back(std::isfinite(b) ? json(b) : json(nullptr));
    j["diagnostics"] = {{"top_model_counts", counts},
                        {"retention_threshold", d.retention_threshold},
                        {"aggregated", labels(d.aggregated, design)},
                        {"repetition_bic", bics},
                        {"warnings", d.warnings}};

    json cmp = json::array();
    for (const auto& c : report.comparisons) {
        cmp.push_back({{"effects", labels(c.effects, design)}, {"r_squared", c.r_squared}, {"bic", c.bic}});
    }
    j["comparisons"] = cmp;
    return j;
}

void write_human(std::ostream& out, const AnalysisReport& report, const Design& design)
{
    const auto& res = report.result;
    const auto& names = design.factor_names();
    out << "method: " << report.method;
    if (report.seed) out << " (seed " << *report.seed << ")";
    out << "\n";
    if (report.config) {
        const auto& c = *report.config;
        out << "tuning: nrep=" << c.nrep << " nint=" << c.nint << " ntop=" << c.ntop << " pkeep=" << format_g(c.pkeep)
            << " heredity=" << to_string(c.heredity) << "\n";
    }
    out << "active effects: " << (res.active_effects.empty() ? "(none)" : join_labels(res.active_effects, names)) << "\n";
    const auto factors = factor_labels(res.important_factors, design);
    out << "important factors: ";
    for (std::size_t k = 0; k < factors.size(); ++k) out << (k ? ", " : "") << factors[k];
    out << (factors.empty() ? "(none)\n" : "\n");
    if (res.delta) out << "delta: " << format_g(*res.delta) << "\n";
    out << "R^2: " << format_g(100.0 * res.r_squared, 4) << "%\n";

    if (res.final_fit.size() > 0) {
        const auto p = safe_p_values(res.final_fit);
        out << "coefficients (normalized columns):\n";
        for (std::size_t k = 0; k < res.final_fit.size(); ++k) {
            char line[128];
            std::snprintf(line, sizeof line, "  %-6s %12.6g", effect_label(res.final_fit.effects[k], names).c_str(),
                          res.final_fit.coefficients(static_cast<Eigen::Index>(k)));
            out << line;
            if (!p.empty()) out << "   p = " << format_g(p[k], 4);
            out << "\n";
        }
    }

    const auto& d = res.diagnostics;
    if (!d.top_model_counts.empty()) {
        out << "top-model counts (retained at >= " << d.retention_threshold << "):\n";
        for (const auto& c : d.top_model_counts) out << "  " << effect_label(c.effect, names) << " " << c.count << "\n";
    }
    for (const auto& c : report.comparisons) {
        out << "model " << join_labels(c.effects, names) << ": R^2 = " << format_g(100.0 * c.r_squared, 4)
            << "%, BIC = " << format_g(c.bic) << "\n";
    }
    for (const auto& w : d.warnings) out << "warning: " << w << "\n";
}

void write_csv(std::ostream& out, const AnalysisReport& report, const Design& design)
{
    const auto& res = report.result;
    const auto& names = design.factor_names();
    out << "record,name,value\n";
    out << "method," << report.method << ",\n";
    if (report.seed) out << "seed,," << *report.seed << "\n";
    for (const auto& e : res.active_effects) out << "active_effect," << effect_label(e, names) << ",\n";
    for (int f : res.important_factors) out << "important_factor," << names[static_cast<std::size_t>(f)] << ",\n";
    out << "r_squared,," << format_g(res.r_squared, 10) << "\n";
    const auto p = safe_p_values(res.final_fit);
    for (std::size_t k = 0; k < res.final_fit.size(); ++k) {
        const auto label = effect_label(res.final_fit.effects[k], names);
        out << "coefficient," << label << "," << format_g(res.final_fit.coefficients(static_cast<Eigen::Index>(k)), 10)
            << "\n";
        if (!p.empty()) out << "p_value," << label << "," << format_g(p[k], 10) << "\n";
    }
    for (const auto& c : res.diagnostics.top_model_counts) {
        out << "top_model_count," << effect_label(c.effect, names) << "," << c.count << "\n";
    }
    for (const auto& c : report.comparisons) {
        std::string label;
        for (const auto& e : c.effects) label += (label.empty() ? "" : "+") + effect_label(e, names);
        out << "comparison_r_squared," << label << "," << format_g(c.r_squared, 10) << "\n";
    }
}

void write_simulation_csv(std::ostream& out, std::span<const SimReportEntry> rows)
{
    out << "scenario,method,power,error,iterations,seed\n";
    for (const auto& r : rows) {
        out << r.scenario << "," << r.method << "," << format_g(r.power) << "," << format_g(r.error) << ","
            << r.iterations << "," << r.seed << "\n";
    }
}

} // namespace gdsarm
