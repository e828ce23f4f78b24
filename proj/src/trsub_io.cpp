#include "bslip/trsub_io.hpp"

#include "bslip/errors.hpp"

namespace bslip {

using nlohmann::json;

json to_json(const SubproblemInstance& inst)
{
    const Grid& g = *inst.grid;
    json grid = {{"dim", g.dim()}};
    if (g.dim() == 1) {
        grid["lower"] = {g.domain().lower[0]};
        grid["upper"] = {g.domain().upper[0]};
        grid["n"] = {g.nx()};
    } else {
        grid["lower"] = g.domain().lower;
        grid["upper"] = g.domain().upper;
        grid["n"] = {g.nx(), g.ny()};
    }
    json patch = {{"id", inst.patch.id}};
    if (g.dim() == 1) {
        patch["lower"] = {inst.patch.box.lower[0]};
        patch["upper"] = {inst.patch.box.upper[0]};
    } else {
        patch["lower"] = inst.patch.box.lower;
        patch["upper"] = inst.patch.box.upper;
    }
    return json{{"grid", grid},
                {"values", std::vector<int>(inst.values.values().begin(), inst.values.values().end())},
                {"base", std::vector<int>(inst.base.values().begin(), inst.base.values().end())},
                {"gradient", inst.grad.g},
                {"patch", patch},
                {"radius", inst.radius},
                {"alpha", inst.alpha},
                {"solver", to_string(inst.solver)}};
}

SubproblemInstance instance_from_json(const json& j)
{
    try {
        const json& jg = j.at("grid");
        const int dim = jg.at("dim").get<int>();
        const auto lower = jg.at("lower").get<std::vector<double>>();
        const auto upper = jg.at("upper").get<std::vector<double>>();
        const auto n = jg.at("n").get<std::vector<int>>();
        if (static_cast<int>(lower.size()) < dim || static_cast<int>(upper.size()) < dim ||
            static_cast<int>(n.size()) < dim) {
            throw InvalidArgument("grid entries need one value per axis");
        }
        Box domain;
        for (int a = 0; a < dim; ++a) {
            domain.lower[a] = lower[a];
            domain.upper[a] = upper[a];
        }
        GridPtr grid = build_grid(dim, domain, n);
        ValueSet values(j.at("values").get<std::vector<int>>());
        ControlField base(grid, j.at("base").get<std::vector<int>>());
        GradientField grad{grid, j.at("gradient").get<std::vector<double>>()};
        if (static_cast<int>(grad.g.size()) != grid->cell_count()) {
            throw InvalidArgument("gradient needs one value per cell");
        }
        Patch patch = whole_domain_patch(*grid);
        if (j.contains("patch") && !(j.at("patch").is_string() && j.at("patch").get<std::string>() == "all")) {
            const json& jp = j.at("patch");
            const auto pl = jp.at("lower").get<std::vector<double>>();
            const auto pu = jp.at("upper").get<std::vector<double>>();
            if (static_cast<int>(pl.size()) < dim || static_cast<int>(pu.size()) < dim) {
                throw InvalidArgument("patch box needs one bound per axis");
            }
            Box box = grid->domain();
            for (int a = 0; a < dim; ++a) {
                box.lower[a] = pl[a];
                box.upper[a] = pu[a];
            }
            patch = make_patch(*grid, box, jp.value("id", 0));
        }
        SubproblemInstance inst{grid,
                                std::move(values),
                                std::move(base),
                                std::move(grad),
                                std::move(patch),
                                j.at("radius").get<double>(),
                                j.at("alpha").get<double>(),
                                solver_kind_from_string(j.value("solver", std::string("auto")))};
        validate(inst.view());
        return inst;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed subproblem instance: ") + e.what());
    }
}

json to_json(const CandidateStep& step, SolverKind solver)
{
    return json{{"trial", std::vector<int>(step.trial.values().begin(), step.trial.values().end())},
                {"pred", step.pred},
                {"patch", step.patch_id},
                {"solver", to_string(solver)},
                {"stats",
                 {{"dp_states", step.stats.states},
                  {"search_nodes", step.stats.nodes},
                  {"budget_units", step.stats.budget_units}}}};
}

} // namespace bslip
