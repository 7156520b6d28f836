#ifndef PSTS_COST_MODEL_HPP
#define PSTS_COST_MODEL_HPP

#include "psts/topology.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace psts::cost {

// Duration of one communication step (p) and one computation step (q).
struct StepCosts {
    double p = 0.0;
    double q = 0.0;

    friend bool operator==(const StepCosts&, const StepCosts&) = default;
};

void validate(const StepCosts& costs);

// Communication steps of one pass; computation steps are the same count.
std::int64_t algorithm_steps(const GridShape& shape);

double algorithm_cost(const GridShape& shape, const StepCosts& costs);

double optimal_cost(std::size_t n_real, const StepCosts& costs);

struct ShapeCost {
    GridShape shape;
    std::int64_t steps = 0;
    double seconds = 0.0;
};

struct OptimalityReport {
    std::size_t n_real = 0;
    std::int64_t optimal_steps = 0;
    std::vector<ShapeCost> shapes;      // hypercube first, then by dimension
    std::vector<GridShape> equalities;  // non-hypercube shapes matching the optimum
    std::vector<GridShape> violations;  // shapes cheaper than the optimum

    bool holds() const { return violations.empty(); }
};

// Every shape with all axes >= 2 and capacity in
// [n_real, 2^ceil(log2 n_real) + capacity_slack], plus the line [n_real].
OptimalityReport verify_optimality(std::size_t n_real, const StepCosts& costs, std::size_t capacity_slack = 0);

// p = packet bits / median real link bandwidth, q = 1 / median real power.
// Explicit overrides win.
StepCosts calibrate_costs(const ClusterGraph& cluster, std::optional<double> p_override = std::nullopt,
                          std::optional<double> q_override = std::nullopt);

} // namespace psts::cost

#endif
