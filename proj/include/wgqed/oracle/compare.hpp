#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "wgqed/model.hpp"

namespace wgqed::oracle {

// One quantity sampled on a set of points; points[i] holds the coordinates
// named by axis_names.
struct SampledQuantity {
    std::string name;
    std::vector<std::string> axis_names;
    std::vector<std::vector<double>> points;
    std::vector<Complex> values;
};

// Which error the tolerance applies to: the worst pointwise relative error,
// or the relative L2 norm of the difference over all points.
enum class Metric { max_rel, l2_rel };

struct QuantityComparison {
    std::string name;
    Metric metric = Metric::max_rel;
    double tolerance = 0.0;
    double max_rel_error = 0.0;
    double mean_rel_error = 0.0;
    double l2_rel_error = 0.0;
    std::size_t worst_index = 0;
    std::vector<double> worst_point;
    Complex analytic_at_worst;
    Complex oracle_at_worst;
    bool pass = true;
};

struct ComparisonReport {
    std::vector<QuantityComparison> quantities;

    bool pass() const;
    nlohmann::json to_json() const;
};

// Relative error |a - o| / max(|a|, abs_floor) per point. Throws
// SchemaMismatch if the names, axes or points of the two samples disagree.
QuantityComparison compare_quantity(const SampledQuantity& analytic, const SampledQuantity& oracle,
                                    double tolerance, Metric metric = Metric::max_rel,
                                    double abs_floor = 1e-300);

ComparisonReport compare_report(std::span<const SampledQuantity> analytic,
                                std::span<const SampledQuantity> oracle,
                                std::span<const double> tolerances,
                                Metric metric = Metric::max_rel);

// Closed-form and spectral T-matrix on the product grid k1 x k2 x p1, as a
// pair of samples ready for compare_quantity. Points with k1 < k2 are kept in
// the order given.
std::pair<SampledQuantity, SampledQuantity> t_matrix_samples(const SystemParams& params,
                                                             std::span<const double> k1_grid,
                                                             std::span<const double> k2_grid,
                                                             std::span<const double> p1_grid,
                                                             unsigned threads = 1);

}  // namespace wgqed::oracle
