#include <cmath>
#include <limits>

#include "doctest.h"
#include "wgqed/errors.hpp"
#include "wgqed/sweep.hpp"

using namespace wgqed;

namespace {

SweepGrid small_grid() {
    SweepGrid g;
    g.axis_names = {"a", "b"};
    g.axes = {{0.0, 1.0}, {10.0, 20.0, 30.0}};
    g.value_names = {"re", "im"};
    g.allocate();
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        g.value(c, 0) = 0.1 * static_cast<double>(c);
        g.value(c, 1) = -1.0 / 3.0;
    }
    g.metadata = {{"note", "test"}};
    return g;
}

}  // namespace

TEST_CASE("grid shape and unravel") {
    const SweepGrid g = small_grid();
    CHECK(g.cell_count() == 6);
    CHECK(g.width() == 2);
    CHECK(g.values.size() == 12);
    CHECK(g.unravel(4) == std::vector<std::size_t>{1, 1});
    CHECK_FALSE(g.any_flag());
}

TEST_CASE("csv layout") {
    SweepGrid g = small_grid();
    g.flags[2] = "box";
    const std::string csv = to_csv(g);
    CHECK(csv.rfind("a,b,re,im,flag\n", 0) == 0);
    CHECK(csv.find("\n0,30,0.2,-0.3333333333333333,box\n") != std::string::npos);
    CHECK(csv.find("\n1,10,0.30000000000000004,-0.3333333333333333,\n") != std::string::npos);
}

TEST_CASE("json round trip is exact") {
    SweepGrid g = small_grid();
    g.flags[5] = "error: test";
    const SweepGrid back = sweep_from_json(to_json(g));
    CHECK(back.axis_names == g.axis_names);
    CHECK(back.axes == g.axes);
    CHECK(back.value_names == g.value_names);
    CHECK(back.values == g.values);
    CHECK(back.flags == g.flags);
    CHECK(back.metadata == g.metadata);
}

TEST_CASE("schema checks") {
    SweepGrid g = small_grid();
    g.values.pop_back();
    CHECK_THROWS_AS(g.check(), SchemaMismatch);
    g = small_grid();
    g.values[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(g.check(), SchemaMismatch);
    CHECK_THROWS_AS(to_csv(g), SchemaMismatch);
}

TEST_CASE("strict local maxima") {
    SweepGrid g;
    g.axis_names = {"x", "y"};
    g.axes = {{0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}};
    g.allocate();
    g.value(1 * 5 + 1) = 2.0;
    g.value(3 * 5 + 3) = 1.0;
    g.value(3 * 5 + 2) = 1.0;  // plateau: neither cell is strict
    CHECK(strict_local_maxima(g) == std::vector<std::size_t>{6});
}

TEST_CASE("format_number round-trips") {
    for (double v : {0.1, 1e-300, 14.993746088859542, -0.25, 1e22}) {
        CHECK(std::stod(format_number(v)) == v);
    }
}
