#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gdsarm/dantzig.hpp"
#include "gdsarm/design.hpp"
#include "gdsarm/linreg.hpp"

namespace gdsarm {

/// How the Dantzig estimate is thresholded before the OLS refit.
enum class Thresholding {
    /// Two-cluster k-means (Lloyd iterations started from the split at the
    /// mean) on |beta|, keep the cluster with the larger mean.
    kmeans,
    /// Globally optimal two-cluster split of |beta|.
    exact_two_means,
    /// Keep |beta_j| > gamma_fraction * ||beta||_inf.
    gamma,
};

struct GdsOptions {
    Thresholding thresholding = Thresholding::kmeans;
    double gamma_fraction = 0.1;
    LpOptions lp;
};

struct TwoClusterSplit {
    std::vector<std::size_t> low;
    std::vector<std::size_t> high; // the cluster with the larger mean
};

/// Optimal 1-D 2-means partition by enumerating the sorted split points.
/// All-equal input is one cluster: "high" when the common value is nonzero.
TwoClusterSplit split_two_means(std::span<const double> values);

/// Lloyd's algorithm with two centers, started from {v <= mean} / {v > mean}.
/// Converges to a local optimum which need not be the global one.
TwoClusterSplit kmeans_two_clusters(std::span<const double> values);

/// Within-cluster sum of squares of a partition.
double within_cluster_sse(std::span<const double> values, const TwoClusterSplit& split);

/// Model chosen for one delta: thresholded Dantzig estimate refit by OLS.
struct GdsFit {
    double delta = 0.0;
    std::vector<Effect> selected;       // canonical order
    std::vector<std::size_t> columns;   // matching positions in the ModelMatrix
    std::vector<double> estimates;      // Dantzig estimates of the selected effects
    OlsFit refit;
    double bic = 0.0;
};

struct GdsPath {
    std::vector<GdsFit> candidates; // one per successful delta, ascending delta
    std::size_t best = 0;
    std::vector<std::string> failures;
};

/// Every per-delta candidate plus the index of the minimal-BIC one.
GdsPath gds_path(const ModelMatrix& matrix, const GdsOptions& options = {});

/// Minimal-BIC candidate over the delta grid (ties go to the smaller delta).
GdsFit gds_run(const ModelMatrix& matrix, const GdsOptions& options = {});

struct EffectCount {
    Effect effect;
    std::size_t count = 0;
};

/// Aggregation diagnostics; empty for single GDS runs.
struct ArmDiagnostics {
    std::vector<double> repetition_bic;
    std::vector<EffectCount> top_model_counts;
    std::size_t retention_threshold = 0;
    std::vector<Effect> aggregated;
    std::vector<std::string> warnings;
};

struct ScreeningResult {
    std::vector<Effect> active_effects;
    std::vector<int> important_factors;
    OlsFit final_fit;
    double r_squared = 0.0;
    std::optional<double> delta;
    ArmDiagnostics diagnostics;
};

/// GDS on the m main effects.
ScreeningResult gds_main_effects(const Design& design, std::span<const double> y, const GdsOptions& options = {});

/// GDS on all main effects and all two-factor interactions.
ScreeningResult gds_all_2fi(const Design& design, std::span<const double> y, const GdsOptions& options = {});

/// GDS on an arbitrary effect list; factor importance is read off the selection.
ScreeningResult gds_effects(const Design& design, std::span<const Effect> effects, std::span<const double> y,
                            const GdsOptions& options = {});

} // namespace gdsarm
