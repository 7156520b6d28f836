#include "psts/crossover.hpp"

#include "psts/error.hpp"
#include "psts/pslb.hpp"
#include "psts/random.hpp"
#include "psts/scan.hpp"
#include "psts/scheduling.hpp"

#include <algorithm>
#include <cmath>

namespace psts::cost {

namespace {

constexpr std::size_t kPrescanPoints = 9;
constexpr std::size_t kMaxIterations = 40;
constexpr double kRelativeWidth = 1e-3;

const ClusterGraph& cluster_of(const CrossoverQuery& q)
{
    if (q.cluster == nullptr)
        throw ValidationError("crossover query has no cluster");
    if (!std::isfinite(q.skew_lo) || !std::isfinite(q.skew_hi) || q.skew_lo < 0 || q.skew_hi > 1 ||
        q.skew_lo >= q.skew_hi)
        throw ValidationError("crossover bounds must satisfy 0 <= lo < hi <= 1");
    return *q.cluster;
}

std::vector<TaskSpec> as_specs(const ClusterGraph& cluster, std::span<const PlacedTask> tasks)
{
    std::vector<TaskSpec> out;
    out.reserve(tasks.size());
    for (const auto& t : tasks)
        out.push_back({t.id, cluster.node(t.node).id, t.beta, t.mu, 0.0});
    return out;
}

double makespan(const ClusterGraph& cluster, const HyperGrid& hg, std::span<const PlacedTask> tasks)
{
    const auto specs = as_specs(cluster, tasks);
    return sim::simulate(cluster, hg, specs, sim::Policy::none(), StepCosts{0.0, 1.0}).makespan;
}

} // namespace

std::string to_string(CrossoverStatus status)
{
    switch (status) {
    case CrossoverStatus::Found:
        return "found";
    case CrossoverStatus::AlwaysBeneficial:
        return "always";
    case CrossoverStatus::NeverBeneficial:
        return "never";
    }
    return "?";
}

std::vector<PlacedTask> crossover_instance(const CrossoverQuery& query, double skew)
{
    const ClusterGraph& cluster = cluster_of(query);
    if (!(skew >= 0.0 && skew <= 1.0))
        throw ValidationError("skew must lie in [0, 1]");
    const HyperGrid hg = embed(cluster, query.shape);

    std::vector<NodeIndex> real;
    std::vector<Rational> taus;
    for (std::size_t r = 0; r < hg.capacity(); ++r)
        if (auto v = hg.node_at(r); v && !cluster.node(*v).is_virtual()) {
            real.push_back(*v);
            taus.push_back(cluster.node(*v).tau);
        }
    std::vector<std::string> ids;
    for (auto v : real)
        ids.push_back(cluster.node(v).id);

    sim::WorkloadSpec spec = query.workload;
    spec.seed = derive_seed(query.seed, 7);
    const auto generated = sim::generate_workload(spec, ids);

    std::vector<Units> betas;
    Units total = 0;
    for (const auto& t : generated) {
        betas.push_back(t.beta);
        total += t.beta;
    }
    const auto profile = scan::power_profile(taus);
    const auto where = pslb::assign_tasks(betas, profile);

    std::size_t weakest = 0;
    for (std::size_t i = 1; i < real.size(); ++i)
        if (taus[i] < taus[weakest])
            weakest = i;

    std::vector<PlacedTask> out;
    out.reserve(generated.size() + 1);
    // backlog skew: tasks held elsewhere pile onto the weakest node, in unit
    // order, until skew * W units have moved
    Units moved = 0;
    for (std::size_t k = 0; k < generated.size(); ++k) {
        std::size_t slot = where[k];
        if (query.mode == CrossoverMode::Backlog && slot != weakest &&
            static_cast<double>(moved) < skew * static_cast<double>(total)) {
            slot = weakest;
            moved += generated[k].beta;
        }
        out.push_back({generated[k].id, real[slot], generated[k].beta, generated[k].mu});
    }
    if (query.mode == CrossoverMode::Arrival) {
        std::int64_t mu_sum = 0;
        for (const auto& t : generated)
            mu_sum += t.mu;
        const auto mu = static_cast<std::int64_t>(
            std::llround(static_cast<double>(mu_sum) / static_cast<double>(generated.size())));
        const auto beta = std::max<Units>(1, static_cast<Units>(std::llround(skew * static_cast<double>(total))));
        // id 0 leads the weakest node's local order; at the tail its first
        // unit would always stay inside that node's share
        out.insert(out.begin(), PlacedTask{0, real[weakest], beta, mu});
    }
    return out;
}

CrossoverProbe probe(const CrossoverQuery& query, double skew)
{
    const ClusterGraph& cluster = cluster_of(query);
    validate(query.costs);
    const HyperGrid hg = embed(cluster, query.shape);
    const auto tasks = crossover_instance(query, skew);

    const auto schedule = scheduling::plan(cluster, hg, tasks);
    const auto balanced = scheduling::apply(schedule.plan, cluster, tasks);
    const auto bandwidth = bottleneck_table(cluster);

    CrossoverProbe p;
    p.skew = skew;
    p.makespan_unbalanced = makespan(cluster, hg, tasks);
    p.makespan_balanced = makespan(cluster, hg, balanced);
    double longest = 0.0;
    std::unordered_map<TaskId, std::int64_t> mu;
    for (const auto& t : tasks)
        mu.emplace(t.id, t.mu);
    for (const auto& m : schedule.plan.moves)
        longest = std::max(longest, static_cast<double>(mu.at(m.task)) *
                                        static_cast<double>(cluster.packet_bits()) / bandwidth[m.from][m.to]);
    p.overhead = algorithm_cost(query.shape, query.costs) + longest;
    p.phi = p.makespan_balanced > 0.0 ? p.benefit() / p.makespan_balanced : 0.0;
    return p;
}

CrossoverResult estimate_crossover(const CrossoverQuery& query)
{
    cluster_of(query);
    CrossoverResult result;

    std::vector<CrossoverProbe> scan;
    for (std::size_t i = 0; i < kPrescanPoints; ++i) {
        const double s = query.skew_lo + (query.skew_hi - query.skew_lo) * static_cast<double>(i) /
                                             static_cast<double>(kPrescanPoints - 1);
        scan.push_back(probe(query, s));
    }
    std::size_t changes = 0;
    for (std::size_t i = 1; i < scan.size(); ++i)
        if (scan[i].beneficial() != scan[i - 1].beneficial())
            ++changes;
    result.monotone = changes <= 1 && (changes == 0 || !scan.front().beneficial());

    if (scan.front().beneficial()) {
        result.status = CrossoverStatus::AlwaysBeneficial;
        result.above = scan.front();
        result.phi = scan.front().phi;
        result.skew = scan.front().skew;
        return result;
    }
    auto first = std::find_if(scan.begin(), scan.end(), [](const auto& p) { return p.beneficial(); });
    if (first == scan.end()) {
        result.status = CrossoverStatus::NeverBeneficial;
        result.below = scan.back();
        result.phi = scan.back().phi;
        result.skew = scan.back().skew;
        return result;
    }

    CrossoverProbe lo = *(first - 1);
    CrossoverProbe hi = *first;
    while (result.iterations < kMaxIterations && hi.skew - lo.skew > kRelativeWidth * hi.skew) {
        ++result.iterations;
        auto mid = probe(query, 0.5 * (lo.skew + hi.skew));
        (mid.beneficial() ? hi : lo) = mid;
    }
    result.status = CrossoverStatus::Found;
    result.below = lo;
    result.above = hi;
    result.phi = hi.phi;
    result.skew = hi.skew;
    return result;
}

} // namespace psts::cost
