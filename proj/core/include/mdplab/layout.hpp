#pragma once

#include <string>
#include <vector>

#include "mdplab/types.hpp"

namespace mdplab {

/// Parsed grid layout. One character per cell:
///   '%' wall, '.' food pellet / brick, 'P' agent (PacMan or player paddle),
///   'G' ghost / computer paddle, 'o' ball, ' ' empty.
/// The grid must be rectangular with a full wall border, contain exactly one
/// 'P', at most one 'o', and at most 64 items.
struct LayoutSpec {
    int width = 0;
    int height = 0;
    std::string cells;  // row-major, width * height characters

    Cell agent_start;
    std::vector<Cell> element_starts;  // 'G' cells in row-major order
    std::vector<Cell> items;           // '.' cells in row-major order; bit i of the item mask
    Cell ball_start;
    bool has_ball = false;

    char at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x]; }
    bool wall(int x, int y) const {
        if (x < 0 || y < 0 || x >= width || y >= height) return true;
        return at(x, y) == '%';
    }
    bool wall(Cell c) const { return wall(c.x, c.y); }

    /// Index into the item bitmask, or -1 when no item starts at the cell.
    int item_index(Cell c) const;

    bool operator==(const LayoutSpec& other) const {
        return width == other.width && height == other.height && cells == other.cells;
    }

    /// Parses and validates a layout. Throws LayoutInvalid with a message
    /// naming the problem (non-rectangular, open border, missing agent, ...).
    static LayoutSpec parse(const std::string& text);
};

LayoutSpec load_layout_file(const std::string& path);

/// Built-in layouts: pacman_v2/v3/v4, pong_p1/p2, breakout_b1/b2/b3.
const LayoutSpec& builtin_layout(const std::string& name);
const std::string& builtin_layout_text(const std::string& name);
std::vector<std::string> builtin_layout_names();
bool is_builtin_layout(const std::string& name);

}  // namespace mdplab
