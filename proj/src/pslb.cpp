#include "psts/pslb.hpp"

#include "psts/error.hpp"

#include <algorithm>

namespace psts::pslb {

std::size_t unit_destination(Units u, const PowerProfile& profile, Units total)
{
    if (u < 0 || u >= total)
        throw ValidationError("unit index " + std::to_string(u) + " outside [0, " + std::to_string(total) + ")");
    const auto& lambda = profile.lambda;
    // first position whose lambda exceeds u/total, minus one
    auto it = std::partition_point(lambda.begin(), lambda.end(),
                                   [&](const Rational& l) { return le_fraction(l, u, total); });
    return static_cast<std::size_t>(it - lambda.begin()) - 1;
}

std::vector<Units> target_bounds(const PowerProfile& profile, Units total)
{
    if (total < 0)
        throw ValidationError("negative total load");
    std::vector<Units> bounds;
    bounds.reserve(profile.size() + 1);
    for (const auto& l : profile.lambda)
        bounds.push_back(ceil_mul(total, l));
    bounds.push_back(total);
    return bounds;
}

std::vector<Units> line_targets(const PowerProfile& profile, Units total)
{
    auto bounds = target_bounds(profile, total);
    std::vector<Units> targets(profile.size());
    for (std::size_t j = 0; j < targets.size(); ++j)
        targets[j] = bounds[j + 1] - bounds[j];
    return targets;
}

UnitMovePlan balance_line(const LineState& state)
{
    if (state.loads.size() != state.profile.size())
        throw ValidationError("line loads and powers differ in length");
    Units total = 0;
    for (std::size_t j = 0; j < state.loads.size(); ++j) {
        if (state.loads[j] < 0)
            throw ValidationError("negative load on line position " + std::to_string(j));
        if (state.profile.taus[j].numerator() == 0 && state.loads[j] != 0)
            throw ValidationError("virtual line position " + std::to_string(j) + " carries load");
        total += state.loads[j];
    }
    const auto bounds = target_bounds(state.profile, total);

    UnitMovePlan plan;
    std::size_t dst = 0;
    Units src_begin = 0;
    for (std::size_t src = 0; src < state.loads.size(); ++src) {
        const Units src_end = src_begin + state.loads[src];
        Units cursor = src_begin;
        while (cursor < src_end) {
            while (bounds[dst + 1] <= cursor)
                ++dst;
            const Units chunk_end = std::min(src_end, bounds[dst + 1]);
            if (dst != src)
                plan.moves.push_back({src, dst, chunk_end - cursor});
            cursor = chunk_end;
        }
        src_begin = src_end;
    }
    return plan;
}

std::vector<Units> apply(const UnitMovePlan& plan, std::vector<Units> loads)
{
    for (const auto& m : plan.moves) {
        if (m.from >= loads.size() || m.to >= loads.size())
            throw ValidationError("unit move references a position outside the line");
        if (m.count <= 0 || m.from == m.to)
            throw ValidationError("malformed unit move");
        loads[m.from] -= m.count;
        loads[m.to] += m.count;
        if (loads[m.from] < 0)
            throw ValidationError("unit move drains more than the source holds");
    }
    return loads;
}

std::vector<std::size_t> assign_tasks(std::span<const Units> betas, const PowerProfile& profile)
{
    Units total = 0;
    for (auto b : betas) {
        if (b < 1)
            throw ValidationError("task with fewer than one work unit");
        total += b;
    }
    std::vector<std::size_t> out;
    out.reserve(betas.size());
    Units first = 0;
    for (auto b : betas) {
        out.push_back(unit_destination(first, profile, total));
        first += b;
    }
    return out;
}

} // namespace psts::pslb
