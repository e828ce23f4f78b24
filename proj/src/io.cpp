#include "bslip/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "bslip/errors.hpp"

namespace bslip {

using nlohmann::json;

void write_field_csv(const ControlField& field, std::ostream& out)
{
    const Grid& g = field.grid();
    for (int iy = 0; iy < g.ny(); ++iy) {
        for (int ix = 0; ix < g.nx(); ++ix) {
            if (ix) out << ',';
            out << field[g.cell_index(ix, iy)];
        }
        out << '\n';
    }
}

ControlField read_field_csv(GridPtr grid, const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open field file " + path.string());
    std::vector<int> values;
    std::string line;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        int v;
        while (row >> v) values.push_back(v);
        if (!row.eof()) throw InvalidArgument("non-integer entry in field file " + path.string());
    }
    return ControlField(std::move(grid), std::move(values));
}

void write_pgm(const ControlField& field, const ValueSet& values, std::ostream& out)
{
    const Grid& g = field.grid();
    const int range = values.range();
    out << "P2\n" << g.nx() << ' ' << g.ny() << "\n255\n";
    for (int iy = g.ny() - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < g.nx(); ++ix) {
            const int v = field[g.cell_index(ix, iy)];
            const int level = range == 0 ? 0 : static_cast<int>(std::lround(255.0 * (v - values.min()) / range));
            out << (ix ? " " : "") << level;
        }
        out << '\n';
    }
}

void write_pgm(const ControlField& field, const ValueSet& values, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    write_pgm(field, values, out);
}

void write_nodal_csv(std::span<const double> values, int nx, int ny, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            out << (i ? "," : "") << fmt::format("{:.17g}", values[static_cast<std::size_t>(j * (nx + 1) + i)]);
        }
        out << '\n';
    }
}

json to_json(const PatchSet& patches)
{
    json list = json::array();
    const int dim = patches.grid ? patches.grid->dim() : 2;
    for (const Patch& p : patches.patches) {
        json box = {{"lower", std::vector<double>(p.box.lower.begin(), p.box.lower.begin() + dim)},
                    {"upper", std::vector<double>(p.box.upper.begin(), p.box.upper.begin() + dim)}};
        list.push_back({{"id", p.id}, {"box", box}, {"cells", p.cells}});
    }
    return json{{"counts", std::vector<int>(patches.counts.begin(), patches.counts.begin() + dim)},
                {"overlap", std::vector<double>(patches.overlap.begin(), patches.overlap.begin() + dim)},
                {"patches", list}};
}

json to_json(const IterationRecord& rec)
{
    json solved = json::array();
    for (const SolveRecord& s : rec.solved) {
        solved.push_back({{"k", s.k},
                          {"patch", s.patch},
                          {"pred", s.pred},
                          {"ared", s.ared},
                          {"accepted", s.accepted},
                          {"refined", s.refined},
                          {"dominated", s.dominated}});
    }
    json applied = json::array();
    for (const AppliedRecord& a : rec.applied) {
        applied.push_back({{"k", a.k}, {"patch", a.patch}, {"J_after", a.J_after}});
    }
    return json{{"n", rec.n},
                {"J_before", rec.J_before},
                {"J_after", rec.J_after},
                {"F", rec.F},
                {"TV", rec.TV},
                {"terminal", rec.terminal},
                {"greedy_break", rec.greedy_break},
                {"solved", solved},
                {"applied", applied}};
}

json to_json(const RunResult& result)
{
    return json{{"reason", to_string(result.reason)},
                {"outer_iterations", result.records.size()},
                {"subproblems", result.totals.subproblems},
                {"wall_s", result.totals.wall_seconds},
                {"J", result.final_objective.J()},
                {"F", result.final_objective.F},
                {"TV", result.final_objective.tv_value()},
                {"alpha", result.final_objective.alpha},
                {"k_cap", result.k_cap},
                {"lipschitz", result.lipschitz},
                {"final", std::vector<int>(result.final.values().begin(), result.final.values().end())}};
}

SummaryRow summarize(const RunResult& result, int n_patches, double alpha)
{
    return SummaryRow{result.final.grid().cell_count(),
                      n_patches,
                      alpha,
                      result.final_objective.J(),
                      result.final_objective.F,
                      result.final_objective.tv_value(),
                      result.totals.subproblems,
                      result.totals.wall_seconds,
                      to_string(result.reason)};
}

std::string summary_header()
{
    return "n_cells,n_patches,alpha,J,F,TV,n_subproblems,wall_s,reason";
}

std::string summary_line(const SummaryRow& r)
{
    return fmt::format("{},{},{},{},{},{},{},{:.3f},{}", r.n_cells, r.n_patches, r.alpha, r.J,
                       r.F, r.TV, r.n_subproblems, r.wall_s, r.reason);
}

} // namespace bslip
