#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gdsarm/design.hpp"

namespace gdsarm {

struct StepwiseConfig {
    double p_enter = 0.01;
    double p_remove = 0.05;
    std::size_t max_steps = 100;

    /// Throws ValidationError unless 0 < p_enter <= p_remove < 1.
    void validate() const;
};

struct StepwiseResult {
    std::vector<Effect> effects; // canonical order
    std::size_t steps = 0;
    /// max_steps ran out before the model settled.
    bool cycling = false;
};

/// Bidirectional p-value stepwise OLS.  Each round first removes, one at a
/// time, the term with the largest p-value while it exceeds p_remove, then adds
/// the candidate whose one-term extension has the smallest p-value if that is
/// below p_enter.  Candidates that would make the model rank deficient, or push
/// it past n-2 terms, are skipped.  Ties go to the earlier effect in canonical
/// order.
StepwiseResult stepwise_regress(const ModelMatrix& matrix, std::span<const Effect> initial,
                                std::span<const Effect> candidates, const StepwiseConfig& config = {});

} // namespace gdsarm
