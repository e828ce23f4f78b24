#pragma once

#include <vector>

#include "bslip/trsub.hpp"

namespace bslip::detail {

// Turns raw solver output into a candidate: pred is recomputed from the
// trial, and a trial that does not strictly improve becomes the base.
CandidateStep finalize(const TrustRegionSubproblem& sub, std::vector<int> trial_values, SolverStats stats);

} // namespace bslip::detail
