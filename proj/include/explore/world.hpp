#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace explore {

/// 2D point in grid units (1 unit = one cell width). Conversion to meters
/// happens only at the I/O boundary via GridMap::cell_width_m().
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
double distance(Point2 a, Point2 b);
double squared_distance(Point2 a, Point2 b);

/// Grid coordinates, row 0 at the bottom of the map.
struct Cell {
    int row = 0;
    int col = 0;
    bool operator==(const Cell&) const = default;
};

/// 1-based boustrophedon cell number: row 0 runs left to right,
/// row 1 right to left, alternating.
using CellIndex = int;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ground-truth occupancy map. Immutable after parse; all queries are pure.
/// Cells are half-open squares [col, col+1) x [row, row+1) in grid units,
/// so every point belongs to exactly one cell and boundary/corner ties are
/// deterministic. The map border acts as a wall: rays clip at it and
/// sight lines never cross it.
class GridMap {
public:
    GridMap(int width_cells, int height_cells, double cell_width_m,
            std::vector<uint8_t> occupancy_row_major);

    /// Parses the map text format: "width height cell_width" on the first
    /// line, then `height` rows of `width` characters from {'#', '.'},
    /// top row first. Throws ParseError naming line and column.
    static GridMap parse(std::istream& in);
    static GridMap parse_text(const std::string& text);
    static GridMap load_file(const std::string& path);

    int width() const { return width_; }
    int height() const { return height_; }
    int cell_count() const { return width_ * height_; }
    double cell_width_m() const { return cell_width_m_; }

    bool in_bounds(Cell c) const {
        return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
    }
    bool occupied(Cell c) const { return occupancy_[c.row * width_ + c.col] != 0; }
    bool occupied(CellIndex j) const { return occupied(cell_of(j)); }
    int free_cell_count() const { return free_cells_; }

    /// True for points inside the closed map rectangle [0,W]x[0,H].
    bool contains(Point2 p) const {
        return p.x >= 0.0 && p.x <= width_ && p.y >= 0.0 && p.y <= height_;
    }

    /// Cell containing a point; points on the far border clamp to the last
    /// row/column so the closed rectangle maps to a valid cell.
    Cell cell_at(Point2 p) const;

    CellIndex index_of(Cell c) const;
    Cell cell_of(CellIndex j) const;
    Point2 center_of(Cell c) const { return {c.col + 0.5, c.row + 0.5}; }
    Point2 center_of(CellIndex j) const { return center_of(cell_of(j)); }

    /// All cells the segment passes through under the half-open convention,
    /// ordered from the origin. The endpoint is clipped to the map border.
    /// A zero-length segment yields the origin's cell alone.
    std::vector<Cell> traverse_ray(Point2 origin, Point2 endpoint) const;

    /// True iff no traversed cell between a and b is occupied. Points
    /// outside the map are never visible.
    bool line_of_sight(Point2 a, Point2 b) const;

    /// Range-limited visibility disc: indices of cells whose center lies
    /// within distance R of `center` and is visible from it, ascending.
    std::vector<CellIndex> disc_cells(Point2 center, double R) const;

    /// Free cells reachable from `start` by 4-connected flood fill over
    /// ground truth; indexed row-major like the occupancy.
    std::vector<uint8_t> reachable_free(Cell start) const;

private:
    int width_;
    int height_;
    double cell_width_m_;
    std::vector<uint8_t> occupancy_;
    int free_cells_ = 0;
};

}  // namespace explore
