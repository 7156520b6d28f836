#include "psts/scheduling.hpp"

#include "psts/error.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace psts::scheduling {

std::string to_string(Role role)
{
    switch (role) {
    case Role::Sender:
        return "sender";
    case Role::Receiver:
        return "receiver";
    case Role::Neutral:
        return "neutral";
    }
    return "?";
}

namespace {

template <typename T>
T range_sum(std::span<const T> v, std::size_t begin, std::size_t end)
{
    T s{};
    for (std::size_t i = begin; i < end; ++i)
        s += v[i];
    return s;
}

} // namespace

std::vector<LevelScan> hierarchical_scans(const HyperGrid& hg, std::span<const Units> cell_loads,
                                          std::span<const Rational> cell_taus)
{
    const auto& shape = hg.shape();
    if (cell_loads.size() != hg.capacity() || cell_taus.size() != hg.capacity())
        throw ValidationError("per-cell vectors do not match the grid capacity");
    const std::size_t d = shape.dimension();
    std::vector<LevelScan> out;
    for (std::size_t level = 1; level <= d; ++level) {
        const std::size_t group_depth = d - level;
        const std::size_t group_block = shape.block_size(group_depth);
        const std::size_t entry_block = shape.block_size(group_depth + 1);
        LevelScan ls{level, {}};
        for (std::size_t g = 0; g < hg.capacity(); g += group_block) {
            std::vector<Units> loads;
            std::vector<Rational> powers;
            for (std::size_t e = g; e < g + group_block; e += entry_block) {
                loads.push_back(range_sum(cell_loads, e, e + entry_block));
                powers.push_back(range_sum(cell_taus, e, e + entry_block));
            }
            ls.groups.push_back({g, g + group_block, scan::exclusive_scan(loads), scan::exclusive_scan(powers)});
        }
        out.push_back(std::move(ls));
    }
    return out;
}

std::vector<SliceSummary> classify_slices(std::span<const Units> loads, std::span<const Rational> powers,
                                          std::span<const Units> targets)
{
    if (loads.size() != powers.size() || loads.size() != targets.size())
        throw ValidationError("slice summaries differ in length");
    Rational total_power = 0;
    for (const auto& p : powers)
        total_power += p;
    Units load_sum = 0;
    Units target_sum = 0;
    std::vector<SliceSummary> out(loads.size());
    for (std::size_t i = 0; i < loads.size(); ++i) {
        auto& s = out[i];
        s.rank = i;
        s.load = loads[i];
        s.power = powers[i];
        s.gamma = total_power.numerator() == 0 ? Rational(0) : powers[i] / total_power;
        s.target = targets[i];
        s.role = s.load > s.target ? Role::Sender : s.load < s.target ? Role::Receiver : Role::Neutral;
        load_sum += loads[i];
        target_sum += targets[i];
    }
    if (load_sum != target_sum)
        throw ValidationError("slice targets do not sum to the level load");
    return out;
}

std::vector<SliceSummary> classify_slices(std::span<const Units> loads, std::span<const Rational> powers)
{
    const Units total = std::accumulate(loads.begin(), loads.end(), Units{0});
    std::vector<Units> targets(loads.size(), 0);
    if (total > 0)
        targets = pslb::line_targets(scan::power_profile(powers), total);
    return classify_slices(loads, powers, targets);
}

SenderSplit sender_split(std::span<const Units> loads, Units target)
{
    Units total = 0;
    for (auto l : loads) {
        if (l < 0)
            throw ValidationError("negative node load in sender split");
        total += l;
    }
    if (target < 0 || target > total)
        throw ValidationError("sender target " + std::to_string(target) + " outside [0, " + std::to_string(total) + "]");

    SenderSplit out;
    out.kept.resize(loads.size(), 0);
    std::vector<__int128> remainder(loads.size(), 0);
    Units kept_sum = 0;
    if (total > 0) {
        for (std::size_t i = 0; i < loads.size(); ++i) {
            __int128 scaled = static_cast<__int128>(loads[i]) * target;
            out.kept[i] = static_cast<Units>(scaled / total);
            remainder[i] = scaled % total;
            kept_sum += out.kept[i];
        }
    }
    std::vector<std::size_t> order(loads.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; kept_sum < target; ++k) {
        ++out.kept[order[k]];
        ++kept_sum;
    }
    out.migrating.resize(loads.size());
    for (std::size_t i = 0; i < loads.size(); ++i)
        out.migrating[i] = loads[i] - out.kept[i];
    return out;
}

Routing route_migrations(const std::vector<std::vector<Units>>& migrating, std::span<const Units> deficits)
{
    Units stream = 0;
    for (const auto& s : migrating)
        for (auto m : s) {
            if (m < 0)
                throw ValidationError("negative migrating count");
            stream += m;
        }
    Units demand = 0;
    for (auto d : deficits) {
        if (d < 0)
            throw ValidationError("negative receiver deficit");
        demand += d;
    }
    if (stream != demand)
        throw ValidationError("migrating stream (" + std::to_string(stream) + " units) does not match receiver deficits (" +
                              std::to_string(demand) + " units)");

    Routing out;
    std::size_t receiver = 0;
    Units used = 0; // units already placed in the current receiver
    auto skip_full = [&] {
        while (receiver < deficits.size() && used == deficits[receiver]) {
            ++receiver;
            used = 0;
        }
    };
    for (std::size_t s = 0; s < migrating.size(); ++s) {
        for (std::size_t node = 0; node < migrating[s].size(); ++node) {
            Units left = migrating[s][node];
            skip_full();
            out.node_offsets.push_back(used);
            while (left > 0) {
                skip_full();
                Units take = std::min(left, deficits[receiver] - used);
                out.segments.push_back({s, node, receiver, used, take});
                used += take;
                left -= take;
            }
        }
    }
    return out;
}

namespace {

struct ReceiverShare {
    Units stream_begin = 0;
    std::size_t cell_begin = 0;
    std::vector<Units> incoming_bounds; // per cell of the receiver, plus end
    std::vector<Units> base;            // cell count before the incoming units
};

struct CellStep {
    bool sender = false;
    Units kept = 0;
    Units stream_start = 0;
    std::size_t group = 0;
};

struct DepthStep {
    std::vector<CellStep> cells;
    std::vector<std::vector<ReceiverShare>> groups;
};

std::size_t owner(std::span<const Units> bounds, Units index)
{
    // greatest j with bounds[j] <= index; skips zero-width entries
    auto it = std::partition_point(bounds.begin(), bounds.end() - 1, [&](Units b) { return b <= index; });
    return static_cast<std::size_t>(it - bounds.begin()) - 1;
}

} // namespace

Schedule plan(const ClusterGraph& graph, const HyperGrid& hg, std::span<const PlacedTask> tasks)
{
    const auto& shape = hg.shape();
    const std::size_t cells = hg.capacity();
    const std::size_t d = shape.dimension();

    std::vector<Rational> cell_tau(cells, Rational(0));
    for (std::size_t r = 0; r < cells; ++r)
        if (auto n = hg.node_at(r))
            cell_tau[r] = graph.node(*n).tau;

    // tasks per cell in id order
    std::vector<std::vector<std::size_t>> per_cell(cells);
    std::vector<std::size_t> task_cell(tasks.size());
    std::unordered_set<TaskId> ids;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        const auto& t = tasks[k];
        if (!ids.insert(t.id).second)
            throw ValidationError("duplicate task id " + std::to_string(t.id));
        if (t.beta < 1 || t.mu < 0)
            throw ValidationError("task " + std::to_string(t.id) + " has invalid size");
        if (t.node >= graph.nodes().size())
            throw ValidationError("task " + std::to_string(t.id) + " is on an unknown node");
        if (graph.node(t.node).is_virtual())
            throw ValidationError("task " + std::to_string(t.id) + " is on virtual node '" + graph.node(t.node).id + "'");
        task_cell[k] = hg.rank_of(t.node);
        per_cell[task_cell[k]].push_back(k);
    }
    std::vector<Units> count(cells, 0);
    for (std::size_t r = 0; r < cells; ++r) {
        std::sort(per_cell[r].begin(), per_cell[r].end(),
                  [&](std::size_t a, std::size_t b) { return tasks[a].id < tasks[b].id; });
        for (auto k : per_cell[r])
            count[r] += tasks[k].beta;
    }
    const Units total = std::accumulate(count.begin(), count.end(), Units{0});

    Schedule out;
    const auto profile = scan::power_profile(cell_tau);
    const auto bounds = pslb::target_bounds(profile, total);
    out.cell_targets.resize(cells);
    for (std::size_t r = 0; r < cells; ++r)
        out.cell_targets[r] = bounds[r + 1] - bounds[r];
    if (total == 0)
        return out;

    // Unit-level routing, top level first. A unit is tracked as
    // (cell, index in the cell's current sequence).
    std::vector<DepthStep> steps;
    for (std::size_t depth = 0; depth + 1 < d; ++depth) {
        DepthStep step;
        step.cells.resize(cells);
        const std::size_t group_block = shape.block_size(depth);
        const std::size_t child_block = shape.block_size(depth + 1);
        std::vector<Units> next = count;
        for (std::size_t g = 0; g < cells; g += group_block) {
            const std::size_t group_index = g / group_block;
            std::vector<Units> loads, targets;
            std::vector<Rational> powers;
            for (std::size_t c = g; c < g + group_block; c += child_block) {
                loads.push_back(std::accumulate(count.begin() + c, count.begin() + c + child_block, Units{0}));
                targets.push_back(bounds[c + child_block] - bounds[c]);
                powers.push_back(std::accumulate(cell_tau.begin() + c, cell_tau.begin() + c + child_block, Rational(0)));
            }
            GroupDecision decision;
            decision.depth = depth;
            decision.group = {g, g + group_block,
                              GridShape{std::vector<std::size_t>(shape.dims.begin() + static_cast<std::ptrdiff_t>(depth), shape.dims.end())}};
            decision.slices = classify_slices(loads, powers, targets);

            std::vector<std::vector<Units>> streams;
            std::vector<Units> deficits;
            std::vector<ReceiverShare> shares;
            Units stream_pos = 0;
            Units share_pos = 0;
            for (const auto& s : decision.slices) {
                const std::size_t c0 = g + s.rank * child_block;
                const std::size_t c1 = c0 + child_block;
                if (s.role == Role::Sender) {
                    auto split = sender_split(std::span<const Units>(count).subspan(c0, child_block), s.target);
                    for (std::size_t r = c0; r < c1; ++r) {
                        auto& cs = step.cells[r];
                        cs.sender = true;
                        cs.kept = split.kept[r - c0];
                        cs.stream_start = stream_pos;
                        stream_pos += split.migrating[r - c0];
                        next[r] = cs.kept;
                    }
                    streams.push_back(std::move(split.migrating));
                } else if (s.role == Role::Receiver) {
                    const Units deficit = -s.surplus();
                    deficits.push_back(deficit);
                    std::vector<Rational> taus(cell_tau.begin() + c0, cell_tau.begin() + c1);
                    ReceiverShare share;
                    share.stream_begin = share_pos;
                    share.cell_begin = c0;
                    share.incoming_bounds = pslb::target_bounds(scan::power_profile(taus), deficit);
                    share.base.assign(count.begin() + c0, count.begin() + c1);
                    for (std::size_t r = c0; r < c1; ++r)
                        next[r] += share.incoming_bounds[r - c0 + 1] - share.incoming_bounds[r - c0];
                    share_pos += deficit;
                    shares.push_back(std::move(share));
                }
                for (std::size_t r = c0; r < c1; ++r)
                    step.cells[r].group = group_index;
            }
            decision.routing = route_migrations(streams, deficits);
            step.groups.push_back(std::move(shares));
            out.decisions.push_back(std::move(decision));
        }
        count = std::move(next);
        steps.push_back(std::move(step));
    }

    // Lines finish with pslb: after routing every line holds exactly its
    // target, so the global order of final sequences is the unit order.
    std::vector<Units> final_prefix(cells, 0);
    {
        Units run = 0;
        for (std::size_t r = 0; r < cells; ++r) {
            final_prefix[r] = run;
            run += count[r];
        }
    }
    const std::size_t line_len = shape.dims.back();
    for (std::size_t l = 0; l < cells; l += line_len) {
        const Units held = std::accumulate(count.begin() + l, count.begin() + l + line_len, Units{0});
        if (held != bounds[l + line_len] - bounds[l])
            throw std::logic_error("line total differs from its target after routing");
    }

    auto global_key = [&](std::size_t cell, Units index) {
        for (const auto& step : steps) {
            const auto& cs = step.cells[cell];
            if (!cs.sender || index < cs.kept)
                continue;
            const Units offset = cs.stream_start + (index - cs.kept);
            const auto& shares = step.groups[cs.group];
            auto it = std::partition_point(shares.begin(), shares.end(),
                                           [&](const ReceiverShare& s) { return s.stream_begin <= offset; });
            const auto& share = *(it - 1);
            const Units k = offset - share.stream_begin;
            const std::size_t pos = owner(share.incoming_bounds, k);
            cell = share.cell_begin + pos;
            index = share.base[pos] + (k - share.incoming_bounds[pos]);
        }
        return final_prefix[cell] + index;
    };

    // Task order follows the first unit; tasks are then laid out
    // contiguously and cut at the global target boundaries.
    std::vector<std::pair<Units, std::size_t>> keyed;
    keyed.reserve(tasks.size());
    for (std::size_t r = 0; r < cells; ++r) {
        Units index = 0;
        for (auto k : per_cell[r]) {
            keyed.emplace_back(global_key(r, index), k);
            index += tasks[k].beta;
        }
    }
    std::sort(keyed.begin(), keyed.end());

    Units position = 0;
    for (const auto& [key, k] : keyed) {
        const auto& t = tasks[k];
        const std::size_t dest_cell = owner(bounds, position);
        const NodeIndex dest = *hg.node_at(dest_cell);
        out.placements.push_back({t.id, t.node, dest, position});
        if (dest != t.node) {
            out.plan.moves.push_back({t.id, t.node, dest});
            out.plan.migrated_units += t.beta;
            out.plan.migrated_packets += t.mu;
        }
        position += t.beta;
    }
    return out;
}

std::vector<PlacedTask> apply(const MigrationPlan& plan, const ClusterGraph& graph, std::vector<PlacedTask> tasks)
{
    std::unordered_map<TaskId, std::size_t> where;
    for (std::size_t k = 0; k < tasks.size(); ++k)
        where.emplace(tasks[k].id, k);
    std::unordered_set<TaskId> moved;
    for (const auto& m : plan.moves) {
        auto it = where.find(m.task);
        if (it == where.end())
            throw ValidationError("move references unknown task " + std::to_string(m.task));
        if (!moved.insert(m.task).second)
            throw ValidationError("task " + std::to_string(m.task) + " moved twice");
        if (m.from >= graph.nodes().size() || m.to >= graph.nodes().size())
            throw ValidationError("move of task " + std::to_string(m.task) + " references an unknown node");
        if (graph.node(m.to).is_virtual())
            throw ValidationError("move of task " + std::to_string(m.task) + " targets a virtual node");
        auto& t = tasks[it->second];
        if (t.node != m.from)
            throw ValidationError("task " + std::to_string(m.task) + " is not on node '" + graph.node(m.from).id + "'");
        t.node = m.to;
    }
    return tasks;
}

std::vector<Units> node_loads(const ClusterGraph& graph, std::span<const PlacedTask> tasks)
{
    std::vector<Units> loads(graph.nodes().size(), 0);
    for (const auto& t : tasks) {
        if (t.node >= loads.size())
            throw ValidationError("task " + std::to_string(t.id) + " is on an unknown node");
        loads[t.node] += t.beta;
    }
    return loads;
}

} // namespace psts::scheduling
