#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "gdsarm/design.hpp"
#include "gdsarm/gds.hpp"
#include "gdsarm/simulate.hpp"

namespace gdsarm {

struct DesignCsvOptions {
    /// Read 0 as -1 and 1 as +1.
    bool zero_one = false;
};

/// Comma-separated design.  A first row holding any non-numeric token is a
/// header of factor names.  Cells may be -1, +1, 1, "-" or "+".
Design parse_design_csv(const std::string& text, const DesignCsvOptions& options = {});
Design load_design_csv(const std::filesystem::path& path, const DesignCsvOptions& options = {});

/// A single column or single row of finite reals; `n` is the expected length.
std::vector<double> parse_response_csv(const std::string& text, std::optional<std::size_t> n = std::nullopt);
std::vector<double> load_response_csv(const std::filesystem::path& path, std::optional<std::size_t> n = std::nullopt);

/// Header of factor names, then one row per run.
void write_design_csv(std::ostream& out, const Design& design);

/// The 12-run Plackett-Burman design (cyclic shifts of ++-+++---+- plus a
/// row of minuses), restricted to the first m <= 11 columns.
Design make_pb12(std::size_t m = 11);

/// Fit of a user-named effect set, reported next to the screening result.
struct ModelComparison {
    std::vector<Effect> effects;
    double r_squared = 0.0;
    double bic = 0.0;
};

ModelComparison compare_model(const Design& design, std::span<const double> y, std::span<const Effect> effects);

struct AnalysisReport {
    std::string method;
    std::optional<std::uint64_t> seed;
    std::optional<GdsArmConfig> config;
    ScreeningResult result;
    std::vector<ModelComparison> comparisons;
};

nlohmann::json to_json(const AnalysisReport& report, const Design& design);
void write_human(std::ostream& out, const AnalysisReport& report, const Design& design);
void write_csv(std::ostream& out, const AnalysisReport& report, const Design& design);

/// scenario,method,power,error,iterations,seed with 6 significant digits.
void write_simulation_csv(std::ostream& out, std::span<const SimReportEntry> rows);

} // namespace gdsarm
