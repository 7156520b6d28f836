#ifndef PSTS_SIMULATOR_HPP
#define PSTS_SIMULATOR_HPP

#include "psts/cost_model.hpp"
#include "psts/task.hpp"
#include "psts/topology.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace psts::sim {

struct Distribution {
    enum class Kind { Uniform, Poisson };
    Kind kind = Kind::Uniform;
    double a = 1.0; // uniform lo, or poisson mean
    double b = 1.0; // uniform hi

    static Distribution uniform(std::int64_t lo, std::int64_t hi) { return {Kind::Uniform, double(lo), double(hi)}; }
    static Distribution poisson(double mean) { return {Kind::Poisson, mean, 0.0}; }
    std::string to_string() const;
};

struct ArrivalProcess {
    enum class Kind { Poisson, Window };
    Kind kind = Kind::Window;
    double rate = 0.0;  // poisson arrivals per second
    double start = 0.0; // first instant (poisson) or window start
    double end = 0.0;   // window end

    static ArrivalProcess poisson(double rate, double start = 0.0) { return {Kind::Poisson, rate, start, 0.0}; }
    static ArrivalProcess window(double start, double end) { return {Kind::Window, 0.0, start, end}; }
    std::string to_string() const;
};

struct WorkloadSpec {
    std::size_t m = 1;
    Distribution beta = Distribution::uniform(1, 1);
    Distribution mu = Distribution::uniform(0, 0);
    ArrivalProcess arrivals = ArrivalProcess::window(0.0, 0.0);
    std::uint64_t seed = 0;
};

void validate(const WorkloadSpec& spec);

// Parses "m=4000,beta=uniform:1:100,mu=poisson:5,arrivals=window:0:100".
// Distributions: uniform:LO:HI, poisson:MEAN, const:V.
// Arrivals: window:START:END, poisson:RATE[:START].
WorkloadSpec parse_workload(const std::string& text, std::uint64_t seed);

// Tasks sorted by arrival time, ids 1..m, origins uniform over `nodes`.
// beta, mu, arrivals and origins use independent streams of the seed.
std::vector<TaskSpec> generate_workload(const WorkloadSpec& spec, std::span<const std::string> nodes);

// Random connected cluster: powers uniform in 1..10, spanning tree plus
// extra links, bandwidths in [1e7, 1e8] bit/s, 12000-bit packets.
ClusterGraph make_cluster(std::size_t n, std::uint64_t seed);

struct Policy {
    enum class Kind { None, PstsAt, PstsOnArrival };
    Kind kind = Kind::None;
    double time = 0.0;      // PstsAt
    double threshold = 0.0; // PstsOnArrival

    static Policy none() { return {}; }
    static Policy psts_at(double t) { return {Kind::PstsAt, t, 0.0}; }
    static Policy psts_on_arrival(double phi) { return {Kind::PstsOnArrival, 0.0, phi}; }
    std::string label() const;
};

Policy parse_policy(const std::string& text);

struct SimulationReport {
    std::string policy;
    std::size_t n_nodes = 0;
    std::string dims;
    std::size_t m_tasks = 0;
    std::uint64_t seed = 0;
    double makespan = 0.0;
    std::vector<double> response; // by task, input order
    double mean_response = 0.0;
    double max_response = 0.0;
    double overhead = 0.0;
    Units migrated_units = 0;
    std::int64_t migrated_packets = 0;
    double imbalance = 0.0; // of the initial placement
    std::size_t passes = 0;
    Units executed_units = 0;
};

// Relative makespan excess of a placement: (max_v load_v / tau_v - W / Pi) / (W / Pi).
double imbalance(const ClusterGraph& cluster, std::span<const Units> node_loads);

SimulationReport simulate(const ClusterGraph& cluster, const HyperGrid& hg, std::span<const TaskSpec> tasks,
                          const Policy& policy, const cost::StepCosts& costs, std::uint64_t seed = 0);

// makespan(none) / makespan(psts); throws on mismatched run metadata.
double speedup(const SimulationReport& none, const SimulationReport& psts);

enum class ShapeFamily { Hypercube, Line };

std::string to_string(ShapeFamily family);

struct SweepConfig {
    std::vector<std::size_t> node_counts{2, 4, 8, 16, 32, 64};
    std::vector<ShapeFamily> shapes{ShapeFamily::Hypercube};
    WorkloadSpec workload;
    std::optional<cost::StepCosts> costs; // calibrated per cluster when empty
    Policy policy = Policy::psts_on_arrival(0.1);
    std::uint64_t seed = 1;
    bool crossover = true;
};

struct SweepRow {
    std::size_t n_nodes = 0;
    ShapeFamily family = ShapeFamily::Hypercube;
    SimulationReport none;
    SimulationReport psts;
    double speedup = 1.0;
    std::optional<double> crossover;
};

// One row per (node count, shape) in that order; deterministic.
std::vector<SweepRow> sweep(const SweepConfig& config);

} // namespace psts::sim

#endif
