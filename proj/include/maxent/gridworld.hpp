#pragma once

#include <map>
#include <string>
#include <vector>

#include "maxent/mdp.hpp"

namespace maxent {

struct Cell {
    int x = 0;
    int y = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Diagonal: slips land on the two cells beside the intended target.
// Lateral: slips land on the two cells beside the current cell.
enum class SlipModel { Diagonal, Lateral };

struct GridWorldSpec {
    int width = 1;
    int height = 1;
    Cell initial;
    std::vector<Cell> absorbing;
    std::vector<Cell> walls;  // blocked cells, not states
    std::map<std::string, std::vector<Cell>> labels;
    double p_main = 0.7;
    double p_slip = 0.15;
    SlipModel slip_model = SlipModel::Diagonal;
};

// Throws DomainError describing the first problem found.
void check_gridworld(const GridWorldSpec& spec);

// States are the non-wall cells in row-major order (y outer, x inner), named
// "x_y". Actions are left, right, up, down. A move whose target is outside the
// grid or a wall leaves the agent in place w.p. p_main and slips from the
// current cell; slip mass that would hit a wall folds onto the main outcome.
Mdp build_gridworld(const GridWorldSpec& spec);

std::string cell_name(Cell c);

}  // namespace maxent
