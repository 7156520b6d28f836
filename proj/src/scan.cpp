#include "psts/scan.hpp"

#include "psts/error.hpp"

#include <algorithm>

namespace psts::scan {

PowerProfile power_profile(std::span<const Rational> taus)
{
    PowerProfile p;
    p.taus.assign(taus.begin(), taus.end());
    for (const auto& t : taus)
        if (t.numerator() < 0)
            throw ValidationError("negative processing power in profile");
    p.total = exclusive_scan(taus).total;
    if (p.total.numerator() == 0)
        throw ValidationError("total processing power is zero");
    p.gammas.reserve(taus.size());
    for (const auto& t : taus)
        p.gammas.push_back(t / p.total);
    p.lambda = exclusive_scan(std::span<const Rational>(p.gammas)).prefix;
    return p;
}

Units slice_load(const ClusterGraph& graph, std::span<const PlacedTask> tasks, std::span<const NodeIndex> slice)
{
    std::vector<bool> member(graph.nodes().size(), false);
    for (auto n : slice) {
        if (n >= member.size())
            throw ValidationError("slice references unknown node index " + std::to_string(n));
        member[n] = true;
    }
    Units load = 0;
    for (const auto& t : tasks) {
        if (t.node >= member.size())
            throw ValidationError("task " + std::to_string(t.id) + " is on an unknown node");
        if (member[t.node])
            load += t.beta;
    }
    return load;
}

} // namespace psts::scan
