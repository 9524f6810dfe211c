#include "wgqed/sweep.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "wgqed/errors.hpp"

namespace wgqed {

std::size_t SweepGrid::cell_count() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.size();
    return axes.empty() ? 0 : n;
}

void SweepGrid::allocate() {
    const std::size_t n = cell_count();
    values.assign(n * width(), 0.0);
    flags.assign(n, std::string{});
}

std::vector<std::size_t> SweepGrid::unravel(std::size_t cell) const {
    std::vector<std::size_t> idx(axes.size());
    for (std::size_t d = axes.size(); d-- > 0;) {
        idx[d] = cell % axes[d].size();
        cell /= axes[d].size();
    }
    return idx;
}

bool SweepGrid::any_flag() const {
    for (const auto& f : flags) {
        if (!f.empty()) return true;
    }
    return false;
}

void SweepGrid::check() const {
    if (axis_names.size() != axes.size()) {
        throw SchemaMismatch("SweepGrid: axis name count does not match axis count");
    }
    if (value_names.empty()) throw SchemaMismatch("SweepGrid: no value columns");
    const std::size_t n = cell_count();
    if (values.size() != n * width() || flags.size() != n) {
        throw SchemaMismatch("SweepGrid: value matrix does not match the axis product");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw SchemaMismatch("SweepGrid: non-finite value in cell " +
                                 std::to_string(i / width()));
        }
    }
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const SweepGrid& grid) {
    grid.check();
    const bool with_flags = grid.any_flag();
    std::ostringstream os;
    bool first = true;
    auto sep = [&] {
        if (!first) os << ',';
        first = false;
    };
    for (const auto& a : grid.axis_names) {
        sep();
        os << a;
    }
    for (const auto& v : grid.value_names) {
        sep();
        os << v;
    }
    if (with_flags) os << ",flag";
    os << '\n';
    const std::size_t n = grid.cell_count();
    for (std::size_t c = 0; c < n; ++c) {
        const auto idx = grid.unravel(c);
        first = true;
        for (std::size_t d = 0; d < idx.size(); ++d) {
            sep();
            os << format_number(grid.axes[d][idx[d]]);
        }
        for (std::size_t k = 0; k < grid.width(); ++k) {
            sep();
            os << format_number(grid.value(c, k));
        }
        if (with_flags) os << ',' << grid.flags[c];
        os << '\n';
    }
    return os.str();
}

nlohmann::json to_json(const SweepGrid& grid) {
    grid.check();
    nlohmann::json j;
    j["axes"] = nlohmann::json::array();
    for (std::size_t d = 0; d < grid.axes.size(); ++d) {
        j["axes"].push_back({{"name", grid.axis_names[d]}, {"values", grid.axes[d]}});
    }
    j["value_names"] = grid.value_names;
    j["values"] = grid.values;
    j["flags"] = grid.flags;
    j["metadata"] = grid.metadata;
    return j;
}

SweepGrid sweep_from_json(const nlohmann::json& j) {
    SweepGrid grid;
    try {
        for (const auto& a : j.at("axes")) {
            grid.axis_names.push_back(a.at("name").get<std::string>());
            grid.axes.push_back(a.at("values").get<std::vector<double>>());
        }
        grid.value_names = j.at("value_names").get<std::vector<std::string>>();
        grid.values = j.at("values").get<std::vector<double>>();
        grid.flags = j.at("flags").get<std::vector<std::string>>();
        grid.metadata = j.value("metadata", nlohmann::json::object());
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(std::string("SweepGrid JSON: ") + e.what());
    }
    grid.check();
    return grid;
}

std::vector<std::size_t> strict_local_maxima(const SweepGrid& grid, std::size_t component) {
    if (grid.axes.size() != 2) throw SchemaMismatch("strict_local_maxima: needs a two-axis grid");
    grid.check();
    const std::size_t nx = grid.axes[0].size();
    const std::size_t ny = grid.axes[1].size();
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < nx; ++i) {
        for (std::size_t j = 1; j + 1 < ny; ++j) {
            const double v = grid.value(i * ny + j, component);
            bool peak = true;
            for (int di = -1; di <= 1 && peak; ++di) {
                for (int dj = -1; dj <= 1 && peak; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    peak = v > grid.value((i + di) * ny + (j + dj), component);
                }
            }
            if (peak) peaks.push_back(i * ny + j);
        }
    }
    return peaks;
}

}  // namespace wgqed
