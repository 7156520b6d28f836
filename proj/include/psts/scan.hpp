#ifndef PSTS_SCAN_HPP
#define PSTS_SCAN_HPP

#include "psts/rational.hpp"
#include "psts/task.hpp"
#include "psts/topology.hpp"

#include <span>
#include <vector>

namespace psts::scan {

template <typename T>
struct ScanResult {
    std::vector<T> prefix; // prefix[j] = sum of values[0..j)
    T total{};

    friend bool operator==(const ScanResult&, const ScanResult&) = default;
};

/// Exclusive additive scan: {0, a0, a0 + a1, ...} plus the grand total.
template <typename T>
ScanResult<T> exclusive_scan(std::span<const T> values)
{
    ScanResult<T> out;
    out.prefix.reserve(values.size());
    T running{};
    for (const auto& v : values) {
        out.prefix.push_back(running);
        running += v;
    }
    out.total = running;
    return out;
}

template <typename T>
ScanResult<T> exclusive_scan(const std::vector<T>& values)
{
    return exclusive_scan(std::span<const T>(values));
}

struct PowerProfile {
    std::vector<Rational> taus;
    std::vector<Rational> gammas; // tau / total
    std::vector<Rational> lambda; // exclusive scan of gammas
    Rational total;

    std::size_t size() const { return taus.size(); }
};

// Throws ValidationError on negative powers or a zero total.
PowerProfile power_profile(std::span<const Rational> taus);

inline PowerProfile power_profile(const std::vector<Rational>& taus)
{
    return power_profile(std::span<const Rational>(taus));
}

// Work units of the tasks currently located on one of `slice`'s nodes.
Units slice_load(const ClusterGraph& graph, std::span<const PlacedTask> tasks, std::span<const NodeIndex> slice);

} // namespace psts::scan

#endif
