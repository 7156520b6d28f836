#ifndef PSTS_SCHEDULING_HPP
#define PSTS_SCHEDULING_HPP

// Positional scan task scheduling over a hyper-grid.
//
// Sibling slices at each level are classified as senders or receivers
// against their power-proportional share. A sender keeps a proportional
// prefix of every node's units and streams the tail to the receivers in
// rank order; the receivers spread what they get over their own nodes by
// power. The recursion stops at 1-D lines, which are balanced by pslb.
// Tasks follow the destination of their first work unit.

#include "psts/pslb.hpp"
#include "psts/scan.hpp"
#include "psts/task.hpp"
#include "psts/topology.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace psts::scheduling {

enum class Role { Sender, Receiver, Neutral };

std::string to_string(Role role);

struct SliceSummary {
    std::size_t rank = 0; // position among its siblings
    Units load = 0;
    Rational power = 0;
    Rational gamma = 0; // power / sibling power
    Units target = 0;
    Role role = Role::Neutral;

    Units surplus() const { return load - target; }
};

// Scans of one group of sibling entries (cells of a line, or child slices).
struct GroupScan {
    std::size_t begin = 0; // rank range covered by the group
    std::size_t end = 0;
    scan::ScanResult<Units> loads;
    scan::ScanResult<Rational> powers;
};

struct LevelScan {
    std::size_t level = 0; // 1 = lines of cells, d = the whole grid
    std::vector<GroupScan> groups;
};

// Bottom-up scans over every level; the last level's totals are W and Pi.
std::vector<LevelScan> hierarchical_scans(const HyperGrid& hg, std::span<const Units> cell_loads,
                                          std::span<const Rational> cell_taus);

// Targets from the unit-count rule over the sibling powers.
std::vector<SliceSummary> classify_slices(std::span<const Units> loads, std::span<const Rational> powers);

// Same, with targets already fixed (their sum must equal the sum of loads).
std::vector<SliceSummary> classify_slices(std::span<const Units> loads, std::span<const Rational> powers,
                                          std::span<const Units> targets);

struct SenderSplit {
    std::vector<Units> kept;
    std::vector<Units> migrating;
};

// Proportional floor plus largest remainder, ties to the lower rank.
SenderSplit sender_split(std::span<const Units> loads, Units target);

struct RouteSegment {
    std::size_t sender = 0;   // index into the senders argument
    std::size_t node = 0;     // position inside that sender
    std::size_t receiver = 0; // index into the deficits argument
    Units offset = 0;         // first unit's offset within the receiver's share
    Units count = 0;

    friend bool operator==(const RouteSegment&, const RouteSegment&) = default;
};

struct Routing {
    std::vector<RouteSegment> segments;
    // Offset of each sender node's first migrating unit inside the share it
    // lands in, senders concatenated in order.
    std::vector<Units> node_offsets;
};

Routing route_migrations(const std::vector<std::vector<Units>>& migrating, std::span<const Units> deficits);

struct Move {
    TaskId task = 0;
    NodeIndex from = 0;
    NodeIndex to = 0;

    friend bool operator==(const Move&, const Move&) = default;
};

struct MigrationPlan {
    std::vector<Move> moves;
    Units migrated_units = 0;
    std::int64_t migrated_packets = 0;

    bool empty() const { return moves.empty(); }
    friend bool operator==(const MigrationPlan&, const MigrationPlan&) = default;
};

// Classification and routing performed for one group of sibling slices.
struct GroupDecision {
    std::size_t depth = 0; // 0 = whole grid
    SliceView group;
    std::vector<SliceSummary> slices;
    Routing routing;
};

struct TaskPlacement {
    TaskId task = 0;
    NodeIndex from = 0;
    NodeIndex to = 0;
    Units first_unit = 0; // global index of the first unit after reordering
};

struct Schedule {
    MigrationPlan plan;
    std::vector<Units> cell_targets; // per grid rank
    std::vector<GroupDecision> decisions;
    std::vector<TaskPlacement> placements; // in global unit order
};

Schedule plan(const ClusterGraph& graph, const HyperGrid& hg, std::span<const PlacedTask> tasks);

// Throws ValidationError if a move names an unknown task, a wrong source
// or a node outside the grid.
std::vector<PlacedTask> apply(const MigrationPlan& plan, const ClusterGraph& graph, std::vector<PlacedTask> tasks);

// Work units per node index.
std::vector<Units> node_loads(const ClusterGraph& graph, std::span<const PlacedTask> tasks);

} // namespace psts::scheduling

#endif
