#include "psts/cost_model.hpp"

#include "psts/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace psts::cost {

void validate(const StepCosts& costs)
{
    if (!(costs.p >= 0.0) || !(costs.q >= 0.0) || !std::isfinite(costs.p) || !std::isfinite(costs.q))
        throw ValidationError("step costs must be finite and non-negative");
}

std::int64_t algorithm_steps(const GridShape& shape)
{
    psts::validate(shape);
    std::int64_t sum = 0;
    for (auto p : shape.dims)
        sum += static_cast<std::int64_t>(p) - 1;
    return 2 * sum;
}

double algorithm_cost(const GridShape& shape, const StepCosts& costs)
{
    validate(costs);
    return static_cast<double>(algorithm_steps(shape)) * (costs.p + costs.q);
}

double optimal_cost(std::size_t n_real, const StepCosts& costs)
{
    if (n_real < 2)
        throw ValidationError("optimal cost needs at least two nodes");
    validate(costs);
    return 2.0 * static_cast<double>(optimal_dimension(n_real)) * (costs.p + costs.q);
}

OptimalityReport verify_optimality(std::size_t n_real, const StepCosts& costs, std::size_t capacity_slack)
{
    if (n_real < 2)
        throw ValidationError("optimality check needs at least two nodes");
    validate(costs);
    OptimalityReport report;
    report.n_real = n_real;
    report.optimal_steps = 2 * static_cast<std::int64_t>(optimal_dimension(n_real));
    const GridShape cube = hypercube_shape(n_real);
    const std::size_t max_capacity = (std::size_t{1} << optimal_dimension(n_real)) + capacity_slack;

    std::vector<GridShape> found;
    std::vector<std::size_t> dims;
    std::function<void(std::size_t)> extend = [&](std::size_t capacity) {
        if (!dims.empty() && capacity >= n_real)
            found.push_back(GridShape{dims});
        for (std::size_t p = 2; capacity * p <= max_capacity; ++p) {
            dims.push_back(p);
            extend(capacity * p);
            dims.pop_back();
        }
    };
    extend(1);
    if (std::find(found.begin(), found.end(), GridShape{{n_real}}) == found.end())
        found.push_back(GridShape{{n_real}});
    std::stable_sort(found.begin(), found.end(), [](const GridShape& a, const GridShape& b) {
        if (a.dimension() != b.dimension())
            return a.dimension() < b.dimension();
        return a.dims < b.dims;
    });
    std::stable_partition(found.begin(), found.end(), [&](const GridShape& s) { return s == cube; });

    const double optimal = optimal_cost(n_real, costs);
    for (auto& shape : found) {
        const auto steps = algorithm_steps(shape);
        const double seconds = algorithm_cost(shape, costs);
        if (steps < report.optimal_steps || seconds < optimal)
            report.violations.push_back(shape);
        else if (steps == report.optimal_steps && !(shape == cube))
            report.equalities.push_back(shape);
        report.shapes.push_back({std::move(shape), steps, seconds});
    }
    return report;
}

namespace {

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

StepCosts calibrate_costs(const ClusterGraph& cluster, std::optional<double> p_override,
                          std::optional<double> q_override)
{
    StepCosts costs;
    if (p_override) {
        costs.p = *p_override;
    } else {
        std::vector<double> bw;
        for (const auto& l : cluster.links())
            if (!l.is_virtual() && !cluster.node(cluster.index_of(l.a)).is_virtual() &&
                !cluster.node(cluster.index_of(l.b)).is_virtual())
                bw.push_back(l.bandwidth);
        if (bw.empty())
            throw ValidationError("cannot calibrate the communication step: cluster has no real links");
        costs.p = static_cast<double>(cluster.packet_bits()) / median(std::move(bw));
    }
    if (q_override) {
        costs.q = *q_override;
    } else {
        std::vector<double> taus;
        for (const auto& n : cluster.nodes())
            if (!n.is_virtual())
                taus.push_back(to_double(n.tau));
        costs.q = 1.0 / median(std::move(taus));
    }
    validate(costs);
    return costs;
}

} // namespace psts::cost
