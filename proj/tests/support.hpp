#ifndef PSTS_TESTS_SUPPORT_HPP
#define PSTS_TESTS_SUPPORT_HPP

#include "psts/error.hpp"
#include "psts/io.hpp"
#include "psts/random.hpp"
#include "psts/scheduling.hpp"
#include "psts/simulator.hpp"
#include "psts/topology.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace testing {

using namespace psts;

inline const std::vector<std::string> kExampleIds = {"v11", "v12", "v13", "v14", "v15", "v16",
                                                     "v21", "v22", "v23", "v24", "v25", "v26",
                                                     "v31", "v32", "v33", "v34", "v35", "v36"};
inline const std::vector<int> kExampleTaus = {3, 4, 5, 2, 1, 5, 1, 2, 2, 1, 1, 3, 5, 1, 4, 2, 6, 2};
inline const std::vector<Units> kExampleLoads = {250, 300, 150, 100, 50,  150, 200, 300, 100,
                                                 400, 300, 700, 200, 50,  50,  200, 300, 200};

inline std::string data_path(const std::string& name)
{
    return std::string(PSTS_DATA_DIR) + "/" + name;
}

inline ClusterGraph example_cluster()
{
    return io::parse_topology(io::read_file(data_path("example_topology.txt")));
}

inline std::vector<TaskSpec> example_tasks()
{
    return io::parse_tasks(io::read_file(data_path("example_tasks.txt")));
}

// Random connected cluster with n real nodes and integer powers in 1..max_tau.
inline ClusterGraph random_cluster(SplitMix64& rng, std::size_t n, std::int64_t max_tau = 10)
{
    std::vector<NodeSpec> nodes;
    for (std::size_t i = 0; i < n; ++i)
        nodes.push_back({"n" + std::to_string(1000 + i), Rational(rng.uniform_int(1, max_tau))});
    std::vector<LinkSpec> links;
    for (std::size_t i = 1; i < n; ++i)
        links.push_back({nodes[i].id, nodes[rng.below(i)].id, double(rng.uniform_int(1, 100)) * 1e6});
    return ClusterGraph(std::move(nodes), std::move(links), 1000);
}

// Random tasks spread over the real nodes; ids are shuffled so that id
// order differs from input order.
inline std::vector<PlacedTask> random_tasks(SplitMix64& rng, const ClusterGraph& g, std::size_t m, Units max_beta)
{
    std::vector<PlacedTask> out;
    std::vector<TaskId> ids(m);
    for (std::size_t k = 0; k < m; ++k)
        ids[k] = 10 * k + 7;
    for (std::size_t k = m; k > 1; --k)
        std::swap(ids[k - 1], ids[rng.below(k)]);
    // skewed origins: a few hot nodes get most tasks
    const std::size_t hot = 1 + rng.below(g.nodes().size());
    for (std::size_t k = 0; k < m; ++k) {
        NodeIndex v = rng.below(2) ? rng.below(hot) : rng.below(g.nodes().size());
        out.push_back({ids[k], v, rng.uniform_int(1, max_beta), rng.uniform_int(0, 20)});
    }
    return out;
}

// W * tau_v / Pi as an exact rational.
inline Rational ideal_load(const ClusterGraph& g, NodeIndex v, Units total)
{
    return Rational(total) * g.node(v).tau / g.total_power();
}

inline double abs_diff(Units load, const Rational& ideal)
{
    return std::abs(to_double(Rational(load) - ideal));
}

} // namespace testing

#endif
