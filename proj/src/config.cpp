#include "bslip/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "bslip/errors.hpp"

namespace bslip {

using nlohmann::json;

namespace {

void reject_unknown(const json& section, const std::string& name, const std::set<std::string>& known)
{
    if (!section.is_object()) {
        throw ConfigError(fmt::format("config section '{}' must be an object", name));
    }
    for (const auto& [key, _] : section.items()) {
        if (!known.count(key)) {
            throw ConfigError(fmt::format("unknown key '{}' in config section '{}'", key, name));
        }
    }
}

ModelKind kind_from_string(const std::string& s)
{
    if (s == "conv1d") return ModelKind::Conv1d;
    if (s == "pde2d") return ModelKind::Pde2d;
    if (s == "quadratic") return ModelKind::Quadratic;
    throw ConfigError("unknown model kind '" + s + "' (expected conv1d, pde2d or quadratic)");
}

template <class T>
void read(const json& section, const char* key, T& out)
{
    if (section.contains(key)) out = section.at(key).get<T>();
}

template <class T>
void read(const json& section, const char* key, std::optional<T>& out)
{
    if (section.contains(key) && !section.at(key).is_null()) out = section.at(key).get<T>();
}

} // namespace

std::vector<int> patch_counts_for(int dim, int n_patches)
{
    if (n_patches < 1) throw ConfigError("number of patches must be positive");
    if (dim == 1) return {n_patches};
    const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_patches))));
    if (r * r != n_patches) {
        throw ConfigError(fmt::format("2D patch total {} is not a square number", n_patches));
    }
    return {r, r};
}

RunConfig parse_config(const json& j)
{
    RunConfig cfg;
    try {
        reject_unknown(j, "root", {"model", "grid", "patches", "algorithm", "output"});
        const json empty = json::object();
        const json& jm = j.contains("model") ? j.at("model") : empty;
        const json& jg = j.contains("grid") ? j.at("grid") : empty;
        const json& jp = j.contains("patches") ? j.at("patches") : empty;
        const json& ja = j.contains("algorithm") ? j.at("algorithm") : empty;
        const json& jo = j.contains("output") ? j.at("output") : empty;
        reject_unknown(jm, "model", {"kind", "alpha", "values", "tau", "eps", "c2", "target"});
        reject_unknown(jg, "grid", {"dim", "n", "lower", "upper"});
        reject_unknown(jp, "patches", {"n_patches", "counts", "overlap", "strict"});
        reject_unknown(ja, "algorithm", {"delta0", "sigma", "max_outer_iters", "lipschitz", "k_cap", "solver",
                                         "parallel_tabulation", "exec", "dfs_cell_cap", "start"});
        reject_unknown(jo, "output", {"dir", "log", "summary", "result", "pgm"});

        cfg.model.kind = kind_from_string(jm.value("kind", std::string("conv1d")));
        const ModelKind kind = cfg.model.kind;

        // kind-specific defaults
        switch (kind) {
        case ModelKind::Conv1d:
            cfg.grid = {1, {512}, {-1.0}, {1.0}};
            cfg.model.values = {-1, 0, 1};
            cfg.patches.overlap = {0.2};
            cfg.algorithm.max_outer_iters = 1000;
            break;
        case ModelKind::Pde2d:
            cfg.grid = {2, {16, 16}, {0.0, 0.0}, {1.0, 1.0}};
            cfg.model.values = {0, 1};
            cfg.model.alpha = 1e-3;
            cfg.patches.overlap = {0.1, 0.1};
            cfg.algorithm.max_outer_iters = 100;
            break;
        case ModelKind::Quadratic:
            cfg.grid = {1, {16}, {0.0}, {1.0}};
            cfg.model.values = {0, 1};
            cfg.model.alpha = 0.0;
            cfg.patches.overlap = {0.2};
            cfg.algorithm.max_outer_iters = 1000;
            break;
        }

        read(jm, "alpha", cfg.model.alpha);
        read(jm, "values", cfg.model.values);
        read(jm, "tau", cfg.model.tau);
        read(jm, "eps", cfg.model.eps);
        read(jm, "c2", cfg.model.c2);
        if (jm.contains("target")) {
            if (kind == ModelKind::Quadratic) {
                const json& t = jm.at("target");
                cfg.model.quadratic_target = t.is_array() ? t.get<std::vector<double>>()
                                                          : std::vector<double>{t.get<double>()};
            } else {
                cfg.model.target = jm.at("target").get<std::string>();
            }
        }

        read(jg, "dim", cfg.grid.dim);
        if (jg.contains("n")) {
            const json& n = jg.at("n");
            cfg.grid.n = n.is_array() ? n.get<std::vector<int>>() : std::vector<int>(cfg.grid.dim, n.get<int>());
        }
        read(jg, "lower", cfg.grid.lower);
        read(jg, "upper", cfg.grid.upper);
        const auto dim = static_cast<std::size_t>(cfg.grid.dim);
        if (cfg.grid.dim != 1 && cfg.grid.dim != 2) throw ConfigError("grid.dim must be 1 or 2");
        if (cfg.grid.n.size() == 1 && dim == 2) cfg.grid.n.push_back(cfg.grid.n[0]);
        if (cfg.grid.lower.size() == 1 && dim == 2) cfg.grid.lower.push_back(0.0);
        if (cfg.grid.upper.size() == 1 && dim == 2) cfg.grid.upper.push_back(1.0);
        if (cfg.grid.n.size() < dim || cfg.grid.lower.size() < dim || cfg.grid.upper.size() < dim) {
            throw ConfigError("grid.n, grid.lower and grid.upper need one entry per axis");
        }

        cfg.patches.counts.assign(dim, 1);
        if (jp.contains("n_patches")) cfg.patches.counts = patch_counts_for(cfg.grid.dim, jp.at("n_patches").get<int>());
        read(jp, "counts", cfg.patches.counts);
        if (jp.contains("overlap")) {
            const json& o = jp.at("overlap");
            cfg.patches.overlap = o.is_array() ? o.get<std::vector<double>>() : std::vector<double>(dim, o.get<double>());
        }
        if (cfg.patches.overlap.size() == 1 && dim == 2) cfg.patches.overlap.push_back(cfg.patches.overlap[0]);
        read(jp, "strict", cfg.patches.strict);
        if (cfg.patches.counts.size() < dim || cfg.patches.overlap.size() < dim) {
            throw ConfigError("patches.counts and patches.overlap need one entry per axis");
        }

        read(ja, "delta0", cfg.algorithm.delta0);
        read(ja, "sigma", cfg.algorithm.sigma);
        read(ja, "max_outer_iters", cfg.algorithm.max_outer_iters);
        read(ja, "lipschitz", cfg.algorithm.lipschitz);
        read(ja, "k_cap", cfg.algorithm.k_cap);
        if (ja.contains("solver")) cfg.algorithm.solver = solver_kind_from_string(ja.at("solver").get<std::string>());
        read(ja, "parallel_tabulation", cfg.algorithm.parallel_tabulation);
        if (ja.contains("exec")) {
            const auto e = ja.at("exec").get<std::string>();
            if (e != "serial" && e != "parallel") throw ConfigError("algorithm.exec must be serial or parallel");
            cfg.algorithm.exec = e == "parallel" ? ExecPolicy::Parallel : ExecPolicy::Serial;
        }
        read(ja, "dfs_cell_cap", cfg.algorithm.dfs_cell_cap);
        read(ja, "start", cfg.algorithm.start);

        read(jo, "dir", cfg.output.dir);
        read(jo, "log", cfg.output.log);
        read(jo, "summary", cfg.output.summary);
        read(jo, "result", cfg.output.result);
        read(jo, "pgm", cfg.output.pgm);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }

    try {
        make_slip_config(cfg).validate();
        (void)make_values(cfg);
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    if (!(cfg.model.alpha >= 0.0)) throw ConfigError("alpha must be nonnegative");
    if (cfg.model.target != "reference" && cfg.model.target != "zero") {
        throw ConfigError("model.target must be reference or zero");
    }
    if (cfg.algorithm.start != "zero" && cfg.algorithm.start != "min" && cfg.algorithm.start != "max") {
        throw ConfigError("algorithm.start must be zero, min or max");
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("cannot parse {}: {}", path.string(), e.what()));
    }
    return parse_config(j);
}

json to_json(const RunConfig& cfg)
{
    json model = {{"kind", to_string(cfg.model.kind)}, {"alpha", cfg.model.alpha}, {"values", cfg.model.values}};
    switch (cfg.model.kind) {
    case ModelKind::Conv1d: model["tau"] = cfg.model.tau; break;
    case ModelKind::Pde2d:
        model["eps"] = cfg.model.eps;
        model["c2"] = cfg.model.c2;
        model["target"] = cfg.model.target;
        break;
    case ModelKind::Quadratic: model["target"] = cfg.model.quadratic_target; break;
    }
    json algorithm = {{"delta0", cfg.algorithm.delta0},
                      {"sigma", cfg.algorithm.sigma},
                      {"max_outer_iters", cfg.algorithm.max_outer_iters},
                      {"solver", to_string(cfg.algorithm.solver)},
                      {"parallel_tabulation", cfg.algorithm.parallel_tabulation},
                      {"exec", cfg.algorithm.exec == ExecPolicy::Parallel ? "parallel" : "serial"},
                      {"dfs_cell_cap", cfg.algorithm.dfs_cell_cap},
                      {"start", cfg.algorithm.start}};
    if (cfg.algorithm.lipschitz) algorithm["lipschitz"] = *cfg.algorithm.lipschitz;
    if (cfg.algorithm.k_cap) algorithm["k_cap"] = *cfg.algorithm.k_cap;
    return json{{"model", model},
                {"grid", {{"dim", cfg.grid.dim}, {"n", cfg.grid.n}, {"lower", cfg.grid.lower}, {"upper", cfg.grid.upper}}},
                {"patches", {{"counts", cfg.patches.counts}, {"overlap", cfg.patches.overlap}, {"strict", cfg.patches.strict}}},
                {"algorithm", algorithm},
                {"output",
                 {{"dir", cfg.output.dir},
                  {"log", cfg.output.log},
                  {"summary", cfg.output.summary},
                  {"result", cfg.output.result},
                  {"pgm", cfg.output.pgm}}}};
}

GridPtr make_grid(const RunConfig& cfg)
{
    Box b;
    for (int a = 0; a < cfg.grid.dim; ++a) {
        b.lower[a] = cfg.grid.lower[a];
        b.upper[a] = cfg.grid.upper[a];
    }
    return build_grid(cfg.grid.dim, b, cfg.grid.n);
}

std::unique_ptr<Model> make_model(const RunConfig& cfg, GridPtr grid)
{
    switch (cfg.model.kind) {
    case ModelKind::Conv1d: {
        Conv1dParams p;
        p.tau = cfg.model.tau;
        p.exec = cfg.algorithm.exec;
        return std::make_unique<Conv1dModel>(std::move(grid), p);
    }
    case ModelKind::Pde2d: {
        Pde2dParams p;
        p.eps = cfg.model.eps;
        p.c2 = cfg.model.c2;
        p.target = cfg.model.target == "zero" ? Pde2dTarget::Zero : Pde2dTarget::Reference;
        return std::make_unique<Pde2dModel>(std::move(grid), p);
    }
    case ModelKind::Quadratic: {
        std::vector<double> t = cfg.model.quadratic_target;
        if (t.empty()) t = {0.0};
        if (t.size() == 1) t.assign(static_cast<std::size_t>(grid->cell_count()), t[0]);
        return std::make_unique<QuadraticModel>(std::move(grid), std::move(t));
    }
    }
    throw ConfigError("unsupported model kind");
}

PatchSet make_patches(const RunConfig& cfg, GridPtr grid)
{
    return make_uniform_patches(std::move(grid), cfg.patches.counts, cfg.patches.overlap, cfg.patches.strict);
}

SlipConfig make_slip_config(const RunConfig& cfg)
{
    SlipConfig s;
    s.delta0 = cfg.algorithm.delta0;
    s.sigma = cfg.algorithm.sigma;
    s.max_outer_iters = cfg.algorithm.max_outer_iters;
    s.lipschitz = cfg.algorithm.lipschitz;
    s.k_cap = cfg.algorithm.k_cap;
    s.solver = cfg.algorithm.solver;
    s.parallel_tabulation = cfg.algorithm.parallel_tabulation;
    s.solve.exec = cfg.algorithm.exec;
    s.solve.dfs_cell_cap = cfg.algorithm.dfs_cell_cap;
    return s;
}

ValueSet make_values(const RunConfig& cfg)
{
    return ValueSet(cfg.model.values);
}

ControlField make_start(const RunConfig& cfg, GridPtr grid)
{
    const ValueSet w = make_values(cfg);
    const int v = cfg.algorithm.start == "min" ? w.min() : cfg.algorithm.start == "max" ? w.max() : w.closest_to_zero();
    return ControlField::constant(std::move(grid), v);
}

} // namespace bslip
