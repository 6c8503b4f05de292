#include "mapf_lab/grid_map.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace mapf_lab {

GridMap::GridMap(int width, int height, std::vector<bool> blocked)
    : width_(width), height_(height), blocked_(std::move(blocked)) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("map dimensions must be positive");
    if (blocked_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw std::invalid_argument("occupancy size does not match width*height");
}

GridMap GridMap::empty(int width, int height) {
    return GridMap(width, height, std::vector<bool>(static_cast<std::size_t>(width) * height, false));
}

int GridMap::passable_count() const noexcept {
    return static_cast<int>(std::count(blocked_.begin(), blocked_.end(), false));
}

namespace {

bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

int parse_int(std::string_view s, std::size_t line_no, const char* what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(line_no, std::string("expected integer ") + what + ", got '" + std::string(s) + "'");
    return value;
}

// "key value" header line; returns the value token.
std::string header_value(const std::string& line, const std::string& key, std::size_t line_no) {
    std::istringstream ss(line);
    std::string k, v, extra;
    if (!(ss >> k >> v) || k != key || (ss >> extra))
        throw ParseError(line_no, "expected '" + key + " <value>' header, got '" + line + "'");
    return v;
}

}  // namespace

GridMap parse_map(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto next = [&](const char* expect) {
        if (!read_line(in, line)) throw ParseError(line_no + 1, std::string("unexpected end of input, expected ") + expect);
        ++line_no;
    };

    next("'type' header");
    header_value(line, "type", line_no);
    next("'height' header");
    const int height = parse_int(header_value(line, "height", line_no), line_no, "height");
    next("'width' header");
    const int width = parse_int(header_value(line, "width", line_no), line_no, "width");
    if (height <= 0 || width <= 0) throw ParseError(line_no, "map dimensions must be positive");
    next("'map' line");
    if (line != "map") throw ParseError(line_no, "expected 'map', got '" + line + "'");

    std::vector<bool> blocked(static_cast<std::size_t>(width) * height, false);
    for (int row = 0; row < height; ++row) {
        next("map row");
        if (static_cast<int>(line.size()) != width)
            throw ParseError(line_no, "row has " + std::to_string(line.size()) + " cells, expected " + std::to_string(width));
        for (int col = 0; col < width; ++col) {
            switch (line[col]) {
                case '.':
                case 'G':
                    break;
                case '@':
                case 'O':
                case 'T':
                case 'W':
                    blocked[static_cast<std::size_t>(row) * width + col] = true;
                    break;
                default:
                    throw ParseError(line_no, std::string("unknown cell character '") + line[col] + "' at column " +
                                                  std::to_string(col));
            }
        }
    }
    while (read_line(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t") != std::string::npos)
            throw ParseError(line_no, "unexpected content after the last map row");
    }
    return GridMap(width, height, std::move(blocked));
}

GridMap load_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map file '" + path + "'");
    return parse_map(in);
}

std::vector<ScenarioPair> parse_scenario(std::istream& in, const GridMap& map) {
    std::string line;
    std::size_t line_no = 0;
    if (!read_line(in, line)) throw ParseError(1, "missing 'version' header");
    ++line_no;
    {
        std::istringstream ss(line);
        std::string key, version;
        if (!(ss >> key >> version) || key != "version") throw ParseError(line_no, "expected 'version <n>' header");
    }

    std::vector<ScenarioPair> pairs;
    while (read_line(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        std::vector<std::string> fields;
        if (line.find('\t') != std::string::npos) {
            std::string field;
            std::istringstream ss(line);
            while (std::getline(ss, field, '\t')) fields.push_back(field);
        } else {
            std::istringstream ss(line);
            std::string field;
            while (ss >> field) fields.push_back(field);
        }
        if (fields.size() != 9)
            throw ParseError(line_no, "expected 9 fields, got " + std::to_string(fields.size()));

        const auto record = static_cast<std::int64_t>(pairs.size());
        const int w = parse_int(fields[2], line_no, "width");
        const int h = parse_int(fields[3], line_no, "height");
        ScenarioPair pair{{parse_int(fields[4], line_no, "start-x"), parse_int(fields[5], line_no, "start-y")},
                          {parse_int(fields[6], line_no, "goal-x"), parse_int(fields[7], line_no, "goal-y")}};
        if (w != map.width() || h != map.height())
            throw ValidationError("record " + std::to_string(record) + ": dimensions " + std::to_string(w) + "x" +
                                      std::to_string(h) + " do not match map " + std::to_string(map.width()) + "x" +
                                      std::to_string(map.height()),
                                  record);
        for (const Cell& c : {pair.start, pair.goal}) {
            if (!map.in_bounds(c.col, c.row))
                throw ValidationError("record " + std::to_string(record) + ": endpoint (" + std::to_string(c.col) +
                                          "," + std::to_string(c.row) + ") out of bounds",
                                      record);
            if (map.blocked(c.col, c.row))
                throw ValidationError("record " + std::to_string(record) + ": endpoint (" + std::to_string(c.col) +
                                          "," + std::to_string(c.row) + ") is blocked",
                                      record);
        }
        pairs.push_back(pair);
    }
    return pairs;
}

std::vector<ScenarioPair> load_scenario(const std::string& path, const GridMap& map) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
    return parse_scenario(in, map);
}

}  // namespace mapf_lab
