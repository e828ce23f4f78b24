#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "bslip/trsub.hpp"

namespace bslip {

// Self-contained trust-region subproblem, serializable to JSON so solver
// issues can be reproduced outside a run.
struct SubproblemInstance {
    GridPtr grid;
    ValueSet values{std::vector<int>{0, 1}};
    ControlField base;
    GradientField grad;
    Patch patch;
    double radius = 0.0;
    double alpha = 0.0;
    SolverKind solver = SolverKind::Auto;

    TrustRegionSubproblem view() const { return {base, grad, patch, radius, alpha, values}; }
};

nlohmann::json to_json(const SubproblemInstance& inst);
SubproblemInstance instance_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CandidateStep& step, SolverKind solver);

} // namespace bslip
