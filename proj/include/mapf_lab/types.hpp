#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mapf_lab {

using VertexId = std::int32_t;
using AgentId = std::int32_t;
using Timestep = std::int32_t;

inline constexpr VertexId kNoVertex = -1;

/// Continuous position in cell units; cell (c, row) spans [c, c+1] x [row, row+1].
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline Point midpoint(Point a, Point b) { return {(a.x + b.x) / 2.0, (a.y + b.y) / 2.0}; }

/// Input text did not follow the expected format. `line` is 1-based (0 when unknown).
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// Well-formed input that violates a semantic requirement (blocked endpoint, endpoint mismatch, ...).
/// `index` identifies the offending record or agent when applicable.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& what, std::int64_t index = -1)
        : std::runtime_error(what), index_(index) {}
    std::int64_t index() const noexcept { return index_; }

  private:
    std::int64_t index_;
};

}  // namespace mapf_lab
