#ifndef PSTS_PSLB_HPP
#define PSTS_PSLB_HPP

// Positional scan load balancing on a single line of nodes.

#include "psts/scan.hpp"
#include "psts/task.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace psts::pslb {

using scan::PowerProfile;

// Position whose interval [lambda_j, lambda_{j+1}) holds u / total.
// Zero-width intervals (virtual nodes) are never returned.
std::size_t unit_destination(Units u, const PowerProfile& profile, Units total);

// Number of unit indices in [0, total) mapped to each position.
std::vector<Units> line_targets(const PowerProfile& profile, Units total);

// Inclusive cumulative boundaries of line_targets: bounds[j] is the first
// unit index owned by position j, bounds[size] == total.
std::vector<Units> target_bounds(const PowerProfile& profile, Units total);

struct LineState {
    std::vector<Units> loads; // per position, grid-rank order
    PowerProfile profile;
};

struct UnitMove {
    std::size_t from;
    std::size_t to;
    Units count;

    friend bool operator==(const UnitMove&, const UnitMove&) = default;
};

struct UnitMovePlan {
    std::vector<UnitMove> moves;

    bool empty() const { return moves.empty(); }
};

UnitMovePlan balance_line(const LineState& state);

std::vector<Units> apply(const UnitMovePlan& plan, std::vector<Units> loads);

// Position for each task of the line; tasks are given in unit-index order
// and each follows the destination of its first work unit.
std::vector<std::size_t> assign_tasks(std::span<const Units> betas, const PowerProfile& profile);

} // namespace psts::pslb

#endif
