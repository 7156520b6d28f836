#ifndef PSTS_TASK_HPP
#define PSTS_TASK_HPP

#include "psts/topology.hpp"

#include <cstdint>
#include <string>

namespace psts {

using TaskId = std::uint64_t;
using Units = std::int64_t;

struct TaskSpec {
    TaskId id = 0;
    std::string origin;
    Units beta = 1;       // work units
    std::int64_t mu = 0;  // packets needed to transfer the task
    double arrival = 0.0; // seconds

    friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

// A task at its current node, as seen by the balancing algorithms.
struct PlacedTask {
    TaskId id = 0;
    NodeIndex node = 0;
    Units beta = 1;
    std::int64_t mu = 0;

    friend bool operator==(const PlacedTask&, const PlacedTask&) = default;
};

} // namespace psts

#endif
