#ifndef PSTS_CROSSOVER_HPP
#define PSTS_CROSSOVER_HPP

// Imbalance level at which one rebalancing pass starts to pay for itself.

#include "psts/cost_model.hpp"
#include "psts/simulator.hpp"
#include "psts/task.hpp"
#include "psts/topology.hpp"

#include <string>
#include <vector>

namespace psts::cost {

enum class CrossoverMode {
    Backlog, // a fraction `skew` of a balanced backlog piles onto the weakest node
    Arrival, // a balanced backlog plus one new task of skew * W units on the weakest node
};

struct CrossoverQuery {
    const ClusterGraph* cluster = nullptr;
    GridShape shape;
    sim::WorkloadSpec workload; // arrivals are ignored: every task is present at time zero
    std::uint64_t seed = 0;
    double skew_lo = 0.0;
    double skew_hi = 1.0;
    StepCosts costs;
    CrossoverMode mode = CrossoverMode::Backlog;
};

struct CrossoverProbe {
    double skew = 0.0;
    double phi = 0.0;
    double makespan_unbalanced = 0.0;
    double makespan_balanced = 0.0;
    double overhead = 0.0; // pass cost plus the longest transfer

    double benefit() const { return makespan_unbalanced - makespan_balanced; }
    bool beneficial() const { return benefit() >= overhead; }
};

enum class CrossoverStatus { Found, AlwaysBeneficial, NeverBeneficial };

std::string to_string(CrossoverStatus status);

struct CrossoverResult {
    CrossoverStatus status = CrossoverStatus::NeverBeneficial;
    double phi = 0.0;   // imbalance at the least beneficial skew found
    double skew = 0.0;
    CrossoverProbe below; // last non-beneficial probe
    CrossoverProbe above; // first beneficial probe
    std::size_t iterations = 0;
    bool monotone = true; // coarse pre-scan saw a single sign change
};

// Tasks of the instance generated for one skew value (node = current location).
// Generated tasks have ids 1..m; the arriving task of Arrival mode has id 0.
std::vector<PlacedTask> crossover_instance(const CrossoverQuery& query, double skew);

CrossoverProbe probe(const CrossoverQuery& query, double skew);

// Bisection on skew to relative width 1e-3, at most 40 iterations.
CrossoverResult estimate_crossover(const CrossoverQuery& query);

} // namespace psts::cost

#endif
