#pragma once

#include <istream>
#include <string>
#include <vector>

#include "mapf_lab/types.hpp"

namespace mapf_lab {

/// Occupancy grid read from a MovingAI `.map` file. Row 0 is the first map row of the file.
class GridMap {
  public:
    GridMap(int width, int height, std::vector<bool> blocked);

    /// All-passable map.
    static GridMap empty(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    bool in_bounds(int col, int row) const noexcept {
        return col >= 0 && row >= 0 && col < width_ && row < height_;
    }
    bool blocked(int col, int row) const { return blocked_[index(col, row)]; }
    bool passable(int col, int row) const { return in_bounds(col, row) && !blocked(col, row); }
    int passable_count() const noexcept;

    friend bool operator==(const GridMap&, const GridMap&) = default;

  private:
    std::size_t index(int col, int row) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
    }

    int width_;
    int height_;
    std::vector<bool> blocked_;
};

struct Cell {
    int col = 0;
    int row = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
};

struct ScenarioPair {
    Cell start;
    Cell goal;
    friend bool operator==(const ScenarioPair&, const ScenarioPair&) = default;
};

/// Parses MovingAI map text. `.` and `G` are passable; `@`, `O`, `T`, `W` are blocked.
/// Throws ParseError naming the offending line.
GridMap parse_map(std::istream& in);
GridMap load_map(const std::string& path);

/// Parses a MovingAI `.scen` file (`version 1` header, tab-separated records) against `map`.
/// Returns pairs in file order. Throws ParseError for malformed lines and ValidationError
/// (with the 0-based record index) for dimension mismatches or blocked/out-of-bounds endpoints.
std::vector<ScenarioPair> parse_scenario(std::istream& in, const GridMap& map);
std::vector<ScenarioPair> load_scenario(const std::string& path, const GridMap& map);

}  // namespace mapf_lab
