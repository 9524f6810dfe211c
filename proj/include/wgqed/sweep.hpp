#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

namespace wgqed {

// Tabulated result over the Cartesian product of one or more axes. Cells are
// row-major with the last axis fastest; each cell carries value_names.size()
// numbers (e.g. {"value"} or {"re", "im"}) and an optional flag string.
struct SweepGrid {
    std::vector<std::string> axis_names;
    std::vector<std::vector<double>> axes;
    std::vector<std::string> value_names{"value"};
    std::vector<double> values;
    std::vector<std::string> flags;
    nlohmann::json metadata = nlohmann::json::object();

    // Allocates zeroed storage for the current axes and value_names.
    void allocate();
    std::size_t cell_count() const;
    std::size_t width() const { return value_names.size(); }
    double& value(std::size_t cell, std::size_t component = 0) {
        return values[cell * width() + component];
    }
    double value(std::size_t cell, std::size_t component = 0) const {
        return values[cell * width() + component];
    }
    // Multi-index of a cell, one entry per axis.
    std::vector<std::size_t> unravel(std::size_t cell) const;
    bool any_flag() const;

    // Throws SchemaMismatch on inconsistent sizes or non-finite values.
    void check() const;
};

std::string to_csv(const SweepGrid& grid);
nlohmann::json to_json(const SweepGrid& grid);
SweepGrid sweep_from_json(const nlohmann::json& j);

// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

// Interior cells of a two-axis grid strictly greater than all 8 neighbours.
std::vector<std::size_t> strict_local_maxima(const SweepGrid& grid, std::size_t component = 0);

}  // namespace wgqed
