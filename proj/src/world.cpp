#include "explore/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

namespace explore {

double distance(Point2 a, Point2 b) { return std::sqrt(squared_distance(a, b)); }

double squared_distance(Point2 a, Point2 b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

GridMap::GridMap(int width_cells, int height_cells, double cell_width_m,
                 std::vector<uint8_t> occupancy_row_major)
    : width_(width_cells),
      height_(height_cells),
      cell_width_m_(cell_width_m),
      occupancy_(std::move(occupancy_row_major)) {
    if (width_ <= 0 || height_ <= 0)
        throw ParseError("map dimensions must be positive");
    if (cell_width_m_ <= 0.0)
        throw ParseError("cell width must be positive");
    if (static_cast<int>(occupancy_.size()) != width_ * height_)
        throw ParseError("occupancy size does not match dimensions");
    free_cells_ = static_cast<int>(std::count(occupancy_.begin(), occupancy_.end(), 0));
}

GridMap GridMap::parse(std::istream& in) {
    std::string header;
    if (!std::getline(in, header))
        throw ParseError("map parse error at line 1: missing header");
    std::istringstream hs(header);
    long long w = 0, h = 0;
    double cw = 0.0;
    if (!(hs >> w >> h >> cw))
        throw ParseError("map parse error at line 1: expected \"width height cell_width\"");
    if (w <= 0 || h <= 0)
        throw ParseError("map parse error at line 1: non-positive dimensions");
    if (cw <= 0.0)
        throw ParseError("map parse error at line 1: non-positive cell width");

    std::vector<uint8_t> occ(static_cast<size_t>(w * h), 0);
    for (long long file_row = 0; file_row < h; ++file_row) {
        std::string line;
        if (!std::getline(in, line))
            throw ParseError("map parse error at line " + std::to_string(file_row + 2) +
                             ": expected " + std::to_string(h) + " map rows, got " +
                             std::to_string(file_row));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (static_cast<long long>(line.size()) != w)
            throw ParseError("map parse error at line " + std::to_string(file_row + 2) +
                             ": row has " + std::to_string(line.size()) +
                             " characters, expected " + std::to_string(w));
        const long long grid_row = h - 1 - file_row;  // file lists the top row first
        for (long long col = 0; col < w; ++col) {
            const char ch = line[static_cast<size_t>(col)];
            if (ch == '#') {
                occ[static_cast<size_t>(grid_row * w + col)] = 1;
            } else if (ch != '.') {
                throw ParseError("map parse error at line " + std::to_string(file_row + 2) +
                                 ", column " + std::to_string(col + 1) +
                                 ": unknown character '" + std::string(1, ch) + "'");
            }
        }
    }
    return GridMap(static_cast<int>(w), static_cast<int>(h), cw, std::move(occ));
}

GridMap GridMap::parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

GridMap GridMap::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open map file: " + path);
    return parse(in);
}

Cell GridMap::cell_at(Point2 p) const {
    int col = static_cast<int>(std::floor(p.x));
    int row = static_cast<int>(std::floor(p.y));
    col = std::clamp(col, 0, width_ - 1);
    row = std::clamp(row, 0, height_ - 1);
    return {row, col};
}

CellIndex GridMap::index_of(Cell c) const {
    const int offset = (c.row % 2 == 0) ? c.col : width_ - 1 - c.col;
    return c.row * width_ + offset + 1;
}

Cell GridMap::cell_of(CellIndex j) const {
    const int z = j - 1;
    const int row = z / width_;
    const int r = z % width_;
    const int col = (row % 2 == 0) ? r : width_ - 1 - r;
    return {row, col};
}

std::vector<Cell> GridMap::traverse_ray(Point2 origin, Point2 endpoint) const {
    const double dx = endpoint.x - origin.x;
    const double dy = endpoint.y - origin.y;

    // Clip the endpoint to the map border along the segment.
    double t_end = 1.0;
    if (dx > 0.0) t_end = std::min(t_end, (width_ - origin.x) / dx);
    else if (dx < 0.0) t_end = std::min(t_end, (0.0 - origin.x) / dx);
    if (dy > 0.0) t_end = std::min(t_end, (height_ - origin.y) / dy);
    else if (dy < 0.0) t_end = std::min(t_end, (0.0 - origin.y) / dy);
    t_end = std::max(t_end, 0.0);

    std::vector<Cell> out;
    Cell cur = cell_at(origin);
    out.push_back(cur);
    if (dx == 0.0 && dy == 0.0) return out;

    const int step_col = dx > 0.0 ? 1 : -1;
    const int step_row = dy > 0.0 ? 1 : -1;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // A crossing in the positive direction takes effect at its parameter t
    // (the boundary point already belongs to the next cell under the
    // half-open convention); a negative crossing takes effect only strictly
    // past t.
    const auto crossing_allowed = [t_end](double t, bool positive) {
        return positive ? t <= t_end : t < t_end;
    };

    const int max_steps = width_ + height_ + 4;
    for (int guard = 0; guard < max_steps; ++guard) {
        // Boundary crossing parameters from the current cell, recomputed
        // fresh each step to avoid accumulation drift.
        double tx = kInf, ty = kInf;
        if (dx != 0.0) {
            const double bx = dx > 0.0 ? cur.col + 1 : cur.col;
            tx = (bx - origin.x) / dx;
        }
        if (dy != 0.0) {
            const double by = dy > 0.0 ? cur.row + 1 : cur.row;
            ty = (by - origin.y) / dy;
        }

        if (tx < ty) {
            if (!crossing_allowed(tx, step_col > 0)) break;
            cur.col += step_col;
            if (cur.col < 0 || cur.col >= width_) break;
            out.push_back(cur);
        } else if (ty < tx) {
            if (!crossing_allowed(ty, step_row > 0)) break;
            cur.row += step_row;
            if (cur.row < 0 || cur.row >= height_) break;
            out.push_back(cur);
        } else {
            // Exact corner crossing. Same-sign steps move diagonally in one
            // event; mixed signs visit the positive-axis cell first because
            // the corner point itself still belongs to it.
            if (tx == kInf) break;
            const bool pos_x = step_col > 0;
            const bool pos_y = step_row > 0;
            if (pos_x == pos_y) {
                if (!crossing_allowed(tx, pos_x)) break;
                cur.col += step_col;
                cur.row += step_row;
                if (!in_bounds(cur)) break;
                out.push_back(cur);
            } else {
                const bool x_first = pos_x;  // positive axis steps first
                if (x_first) {
                    if (!crossing_allowed(tx, true)) break;
                    cur.col += step_col;
                    if (cur.col < 0 || cur.col >= width_) break;
                    out.push_back(cur);
                    if (!crossing_allowed(ty, false)) break;
                    cur.row += step_row;
                    if (cur.row < 0 || cur.row >= height_) break;
                    out.push_back(cur);
                } else {
                    if (!crossing_allowed(ty, true)) break;
                    cur.row += step_row;
                    if (cur.row < 0 || cur.row >= height_) break;
                    out.push_back(cur);
                    if (!crossing_allowed(tx, false)) break;
                    cur.col += step_col;
                    if (cur.col < 0 || cur.col >= width_) break;
                    out.push_back(cur);
                }
            }
        }
    }
    return out;
}

bool GridMap::line_of_sight(Point2 a, Point2 b) const {
    if (!contains(a) || !contains(b)) return false;
    for (const Cell& c : traverse_ray(a, b))
        if (occupied(c)) return false;
    return true;
}

std::vector<CellIndex> GridMap::disc_cells(Point2 center, double R) const {
    std::vector<CellIndex> out;
    if (!contains(center) || R < 0.0) return out;
    const double r2 = R * R;
    const Cell own = cell_at(center);
    const int r_cells = static_cast<int>(std::ceil(R)) + 1;
    for (int row = std::max(0, own.row - r_cells);
         row <= std::min(height_ - 1, own.row + r_cells); ++row) {
        for (int col = std::max(0, own.col - r_cells);
             col <= std::min(width_ - 1, own.col + r_cells); ++col) {
            const Cell c{row, col};
            const Point2 cc = center_of(c);
            if (squared_distance(center, cc) > r2) continue;
            if (!line_of_sight(center, cc)) continue;
            out.push_back(index_of(c));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<uint8_t> GridMap::reachable_free(Cell start) const {
    std::vector<uint8_t> seen(static_cast<size_t>(width_) * height_, 0);
    if (!in_bounds(start) || occupied(start)) return seen;
    std::vector<Cell> stack{start};
    seen[start.row * width_ + start.col] = 1;
    while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        const Cell nbrs[4] = {{c.row + 1, c.col}, {c.row - 1, c.col},
                              {c.row, c.col + 1}, {c.row, c.col - 1}};
        for (const Cell& n : nbrs) {
            if (!in_bounds(n) || occupied(n)) continue;
            uint8_t& mark = seen[n.row * width_ + n.col];
            if (!mark) {
                mark = 1;
                stack.push_back(n);
            }
        }
    }
    return seen;
}

}  // namespace explore
