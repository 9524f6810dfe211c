#include "wgqed/oracle/compare.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wgqed/errors.hpp"
#include "wgqed/oracle/spectral.hpp"
#include "wgqed/parallel.hpp"
#include "wgqed/scatter_two.hpp"

namespace wgqed::oracle {

namespace {

void check_schema(const SampledQuantity& a, const SampledQuantity& o) {
    auto fail = [&](const std::string& what) {
        throw SchemaMismatch("compare '" + a.name + "': " + what);
    };
    if (a.name != o.name) fail("quantity name differs from '" + o.name + "'");
    if (a.axis_names != o.axis_names) fail("axis names differ");
    if (a.points.size() != a.values.size()) fail("analytic points/values size mismatch");
    if (o.points.size() != o.values.size()) fail("oracle points/values size mismatch");
    if (a.points.size() != o.points.size()) fail("different number of points");
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        if (a.points[i].size() != a.axis_names.size() || o.points[i].size() != a.axis_names.size()) {
            fail("point " + std::to_string(i) + " has the wrong number of coordinates");
        }
        for (std::size_t d = 0; d < a.points[i].size(); ++d) {
            const double x = a.points[i][d];
            const double y = o.points[i][d];
            if (std::abs(x - y) > 1e-12 * std::max(1.0, std::abs(x))) {
                std::ostringstream os;
                os << "point " << i << " differs on axis '" << a.axis_names[d] << "': " << x
                   << " vs " << y;
                fail(os.str());
            }
        }
    }
}

}  // namespace

QuantityComparison compare_quantity(const SampledQuantity& analytic, const SampledQuantity& oracle,
                                    double tolerance, Metric metric, double abs_floor) {
    check_schema(analytic, oracle);
    QuantityComparison q;
    q.name = analytic.name;
    q.metric = metric;
    q.tolerance = tolerance;
    const std::size_t n = analytic.values.size();
    double sum = 0.0;
    double diff2 = 0.0;
    double ref2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = analytic.values[i];
        const Complex o = oracle.values[i];
        double err = std::abs(a - o) / std::max(std::abs(a), abs_floor);
        if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
        sum += err;
        diff2 += std::norm(a - o);
        ref2 += std::norm(a);
        if (i == 0 || err > q.max_rel_error) {
            q.max_rel_error = err;
            q.worst_index = i;
        }
    }
    q.mean_rel_error = n > 0 ? sum / static_cast<double>(n) : 0.0;
    if (n > 0) {
        q.worst_point = analytic.points[q.worst_index];
        q.analytic_at_worst = analytic.values[q.worst_index];
        q.oracle_at_worst = oracle.values[q.worst_index];
    }
    q.l2_rel_error = std::sqrt(diff2 / std::max(ref2, abs_floor));
    if (!std::isfinite(q.l2_rel_error)) q.l2_rel_error = std::numeric_limits<double>::infinity();
    q.pass = (metric == Metric::max_rel ? q.max_rel_error : q.l2_rel_error) < tolerance;
    return q;
}

bool ComparisonReport::pass() const {
    for (const auto& q : quantities) {
        if (!q.pass) return false;
    }
    return true;
}

nlohmann::json ComparisonReport::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& q : quantities) {
        rows.push_back({{"quantity", q.name},
                        {"metric", q.metric == Metric::max_rel ? "max_rel" : "l2_rel"},
                        {"tolerance", q.tolerance},
                        {"max_rel_error", q.max_rel_error},
                        {"mean_rel_error", q.mean_rel_error},
                        {"l2_rel_error", q.l2_rel_error},
                        {"worst_index", q.worst_index},
                        {"worst_point", q.worst_point},
                        {"analytic_at_worst", {q.analytic_at_worst.real(), q.analytic_at_worst.imag()}},
                        {"oracle_at_worst", {q.oracle_at_worst.real(), q.oracle_at_worst.imag()}},
                        {"verdict", q.pass ? "pass" : "fail"}});
    }
    return {{"verdict", pass() ? "pass" : "fail"}, {"quantities", rows}};
}

ComparisonReport compare_report(std::span<const SampledQuantity> analytic,
                                std::span<const SampledQuantity> oracle,
                                std::span<const double> tolerances, Metric metric) {
    if (analytic.size() != oracle.size() || analytic.size() != tolerances.size()) {
        throw SchemaMismatch("compare_report: analytic, oracle and tolerance lists differ in length");
    }
    ComparisonReport report;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        report.quantities.push_back(compare_quantity(analytic[i], oracle[i], tolerances[i], metric));
    }
    return report;
}

std::pair<SampledQuantity, SampledQuantity> t_matrix_samples(const SystemParams& params,
                                                             std::span<const double> k1_grid,
                                                             std::span<const double> k2_grid,
                                                             std::span<const double> p1_grid,
                                                             unsigned threads) {
    SampledQuantity closed{"T", {"k1", "k2", "p1"}, {}, {}};
    for (double k1 : k1_grid) {
        for (double k2 : k2_grid) {
            for (double p1 : p1_grid) closed.points.push_back({k1, k2, p1});
        }
    }
    SampledQuantity spectral = closed;
    closed.values.resize(closed.points.size());
    spectral.values.resize(closed.points.size());
    parallel_for(closed.points.size(), threads, [&](std::size_t i) {
        const auto& pt = closed.points[i];
        const TwoPhotonIn in(pt[0], pt[1]);
        closed.values[i] = t_matrix_two(params, in, pt[2]).value;
        spectral.values[i] = spectral_t_matrix(params, in, pt[2]);
    });
    return {closed, spectral};
}

}  // namespace wgqed::oracle
