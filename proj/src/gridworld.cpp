#include "maxent/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "maxent/error.hpp"

namespace maxent {

std::string cell_name(Cell c) { return std::to_string(c.x) + "_" + std::to_string(c.y); }

namespace {

struct Dir {
    const char* name;
    int dx, dy;
};

constexpr Dir kDirs[4] = {{"left", -1, 0}, {"right", 1, 0}, {"up", 0, 1}, {"down", 0, -1}};

bool in_bounds(const GridWorldSpec& g, Cell c) {
    return c.x >= 0 && c.y >= 0 && c.x < g.width && c.y < g.height;
}

}  // namespace

void check_gridworld(const GridWorldSpec& g) {
    if (g.width <= 0 || g.height <= 0) throw DomainError("grid width and height must be positive");
    if (!(g.p_main >= 0.0 && g.p_slip >= 0.0) || std::abs(g.p_main + 2 * g.p_slip - 1.0) > 1e-9)
        throw DomainError("p_main + 2*p_slip must equal 1");
    auto check_cells = [&](const std::vector<Cell>& cells, const std::string& what) {
        for (Cell c : cells)
            if (!in_bounds(g, c))
                throw DomainError(what + " cell " + cell_name(c) + " outside the grid");
    };
    check_cells(g.absorbing, "absorbing");
    check_cells(g.walls, "wall");
    for (const auto& [name, cells] : g.labels) check_cells(cells, "label '" + name + "'");
    if (!in_bounds(g, g.initial)) throw DomainError("initial cell outside the grid");
    std::set<Cell> walls(g.walls.begin(), g.walls.end());
    if (walls.count(g.initial)) throw DomainError("initial cell is a wall");
    if (g.labels.size() > 64) throw DomainError("more than 64 labels");
}

Mdp build_gridworld(const GridWorldSpec& g) {
    check_gridworld(g);
    std::set<Cell> walls(g.walls.begin(), g.walls.end());
    std::set<Cell> absorbing(g.absorbing.begin(), g.absorbing.end());

    std::vector<int> index(static_cast<std::size_t>(g.width) * g.height, -1);
    std::vector<Cell> cells;
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            Cell c{x, y};
            if (walls.count(c)) continue;
            index[static_cast<std::size_t>(y) * g.width + x] = static_cast<int>(cells.size());
            cells.push_back(c);
        }
    auto id = [&](Cell c) { return index[static_cast<std::size_t>(c.y) * g.width + c.x]; };
    auto open = [&](Cell c) { return in_bounds(g, c) && id(c) >= 0; };

    std::vector<std::string> ap;
    for (const auto& kv : g.labels) ap.push_back(kv.first);
    std::vector<LabelSet> labels(cells.size(), 0);
    int bit = 0;
    for (const auto& kv : g.labels) {
        for (Cell c : kv.second)
            if (open(c)) labels[id(c)] |= LabelSet{1} << bit;
        ++bit;
    }

    std::vector<std::string> names;
    for (Cell c : cells) names.push_back(cell_name(c));

    std::vector<std::vector<Action>> actions(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        Cell c = cells[i];
        for (const Dir& d : kDirs) {
            Action act;
            act.name = d.name;
            if (absorbing.count(c)) {
                act.outcomes.push_back({static_cast<int>(i), 1.0});
                actions[i].push_back(std::move(act));
                continue;
            }
            Cell target{c.x + d.dx, c.y + d.dy};
            Cell main = open(target) ? target : c;
            Cell base = (g.slip_model == SlipModel::Diagonal) ? main : c;
            std::vector<std::pair<int, double>> mass;
            auto add = [&](Cell to, double p) {
                if (p <= 0.0) return;
                int t = id(to);
                for (auto& m : mass)
                    if (m.first == t) {
                        m.second += p;
                        return;
                    }
                mass.push_back({t, p});
            };
            add(main, g.p_main);
            // Orthogonal offsets to the movement axis.
            const Cell side[2] = {{base.x + d.dy, base.y + d.dx}, {base.x - d.dy, base.y - d.dx}};
            for (Cell sc : side) add(open(sc) ? sc : main, g.p_slip);
            std::sort(mass.begin(), mass.end());
            for (auto& [t, p] : mass) act.outcomes.push_back({t, p});
            actions[i].push_back(std::move(act));
        }
    }
    return Mdp(std::move(names), id(g.initial), std::move(ap), std::move(labels), std::move(actions));
}

}  // namespace maxent
