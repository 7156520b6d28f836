#include "support.hpp"

#include <doctest.h>

#include <map>
#include <numeric>

using namespace psts;
using namespace psts::scheduling;

namespace {

struct Example {
    ClusterGraph graph = testing::example_cluster();
    HyperGrid hg = embed(graph, GridShape{{3, 6}});
    std::vector<PlacedTask> tasks = io::place(graph, testing::example_tasks());
};

std::vector<Rational> cell_taus(const ClusterGraph& g, const HyperGrid& hg)
{
    std::vector<Rational> out(hg.capacity(), Rational(0));
    for (std::size_t r = 0; r < hg.capacity(); ++r)
        if (auto v = hg.node_at(r))
            out[r] = g.node(*v).tau;
    return out;
}

std::vector<Units> cell_loads(const ClusterGraph& g, const HyperGrid& hg, std::span<const PlacedTask> tasks)
{
    const auto by_node = node_loads(g, tasks);
    std::vector<Units> out(hg.capacity(), 0);
    for (std::size_t r = 0; r < hg.capacity(); ++r)
        if (auto v = hg.node_at(r))
            out[r] = by_node[*v];
    return out;
}

} // namespace

TEST_CASE("hierarchical scans of the worked example")
{
    Example ex;
    const auto levels = hierarchical_scans(ex.hg, cell_loads(ex.graph, ex.hg, ex.tasks), cell_taus(ex.graph, ex.hg));
    REQUIRE(levels.size() == 2);
    REQUIRE(levels[0].groups.size() == 3);
    CHECK(levels[0].groups[0].loads.prefix == std::vector<Units>{0, 250, 550, 700, 800, 850});
    CHECK(levels[0].groups[0].loads.total == 1000);
    CHECK(levels[0].groups[1].loads.total == 2000);
    REQUIRE(levels[1].groups.size() == 1);
    const auto& top = levels[1].groups[0];
    CHECK(top.loads.prefix == std::vector<Units>{0, 1000, 3000});
    CHECK(top.loads.total == 4000);
    CHECK(top.powers.prefix == std::vector<Rational>{Rational(0), Rational(20), Rational(30)});
    CHECK(top.powers.total == Rational(50));
}

TEST_CASE("hierarchical scans of a single node")
{
    ClusterGraph g({{"solo", Rational(7)}}, {}, 8);
    const auto hg = embed(g);
    std::vector<Units> loads{12};
    std::vector<Rational> taus{Rational(7)};
    const auto levels = hierarchical_scans(hg, loads, taus);
    REQUIRE(levels.size() == 1);
    CHECK(levels[0].groups[0].loads.prefix == std::vector<Units>{0});
    CHECK(levels[0].groups[0].loads.total == 12);
    CHECK(levels[0].groups[0].powers.total == Rational(7));
}

TEST_CASE("slice classification")
{
    std::vector<Units> loads{1000, 2000, 1000};
    std::vector<Rational> powers{Rational(20), Rational(10), Rational(20)};
    const auto s = classify_slices(loads, powers);
    CHECK(s[0].target == 1600);
    CHECK(s[0].role == Role::Receiver);
    CHECK(s[0].surplus() == -600);
    CHECK(s[1].target == 800);
    CHECK(s[1].role == Role::Sender);
    CHECK(s[1].surplus() == 1200);
    CHECK(s[2].role == Role::Receiver);
    CHECK(s[1].gamma == Rational(1, 5));
    CHECK(s[0].surplus() + s[1].surplus() + s[2].surplus() == 0);

    std::vector<Units> even{10, 10};
    std::vector<Rational> same{Rational(1), Rational(1)};
    for (const auto& x : classify_slices(even, same)) {
        CHECK(x.role == Role::Neutral);
        CHECK(x.surplus() == 0);
    }
    std::vector<Units> wrong{5, 5};
    CHECK_THROWS_AS(classify_slices(even, same, wrong), ValidationError);
    CHECK(to_string(Role::Sender) == "sender");
}

TEST_CASE("sender split")
{
    std::vector<Units> g2{200, 300, 100, 400, 300, 700};
    auto s = sender_split(g2, 800);
    CHECK(s.kept == std::vector<Units>{80, 120, 40, 160, 120, 280});
    CHECK(s.migrating == std::vector<Units>{120, 180, 60, 240, 180, 420});

    auto all = sender_split(g2, 2000);
    CHECK(all.migrating == std::vector<Units>(6, 0));

    std::vector<Units> pair{3, 3};
    CHECK(sender_split(pair, 5).kept == std::vector<Units>{3, 2});
    CHECK_THROWS_AS(sender_split(pair, 7), ValidationError);
    CHECK_THROWS_AS(sender_split(pair, -1), ValidationError);
}

TEST_CASE("sender split properties")
{
    SplitMix64 rng(31);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<Units> loads(1 + rng.below(20));
        for (auto& l : loads)
            l = rng.uniform_int(0, 1000);
        const Units total = std::accumulate(loads.begin(), loads.end(), Units{0});
        const Units target = rng.uniform_int(0, total);
        const auto s = sender_split(loads, target);
        CHECK(std::accumulate(s.kept.begin(), s.kept.end(), Units{0}) == target);
        for (std::size_t i = 0; i < loads.size(); ++i) {
            CHECK(s.kept[i] + s.migrating[i] == loads[i]);
            CHECK(s.migrating[i] >= 0);
            // within one unit of the proportional share
            const Rational exact = total ? Rational(loads[i] * target, total) : Rational(0);
            CHECK(std::abs(to_double(Rational(s.kept[i]) - exact)) < 1.0);
        }
    }
}

TEST_CASE("route migrations")
{
    std::vector<std::vector<Units>> stream{{120, 180, 60, 240, 180, 420}};
    std::vector<Units> deficits{600, 600};
    const auto r = route_migrations(stream, deficits);
    CHECK(r.node_offsets == std::vector<Units>{0, 120, 300, 360, 0, 180});
    for (const auto& seg : r.segments)
        CHECK(seg.receiver == (seg.node < 4 ? 0u : 1u));

    std::vector<Units> one{300};
    const auto single = route_migrations({{100, 50}, {150}}, one);
    CHECK(single.node_offsets == std::vector<Units>{0, 100, 150});

    std::vector<Units> short_by_one{599, 600};
    CHECK_THROWS_AS(route_migrations(stream, short_by_one), ValidationError);

    // a node's units may straddle two receivers
    std::vector<Units> uneven{100, 200};
    const auto split = route_migrations({{150, 150}}, uneven);
    REQUIRE(split.segments.size() == 3);
    CHECK(split.segments[1] == RouteSegment{0, 0, 1, 0, 50});
}

TEST_CASE("plan on the worked example")
{
    Example ex;
    const auto schedule = plan(ex.graph, ex.hg, ex.tasks);

    REQUIRE_FALSE(schedule.decisions.empty());
    const auto& top = schedule.decisions.front();
    CHECK(top.depth == 0);
    REQUIRE(top.slices.size() == 3);
    CHECK(top.slices[0].role == Role::Receiver);
    CHECK(top.slices[1].role == Role::Sender);
    CHECK(top.slices[2].role == Role::Receiver);
    CHECK(top.routing.node_offsets == std::vector<Units>{0, 120, 300, 360, 0, 180});

    const auto after = scheduling::apply(schedule.plan, ex.graph, ex.tasks);
    const auto loads = node_loads(ex.graph, after);
    for (NodeIndex v = 0; v < ex.graph.nodes().size(); ++v)
        CHECK(Rational(loads[v]) == Rational(80) * ex.graph.node(v).tau);

    // migrating tails of the sender line reach the nodes named in the example
    std::map<std::pair<std::string, std::string>, int> flows;
    for (const auto& m : schedule.plan.moves)
        ++flows[{ex.graph.node(m.from).id, ex.graph.node(m.to).id}];
    CHECK(flows[{"v22", "v13"}] > 0);
    CHECK(flows[{"v26", "v35"}] > 0);
    CHECK(schedule.plan.migrated_units == static_cast<Units>(schedule.plan.moves.size()));

    // the sender line drops from 2000 to its 800-unit target
    Units line2 = 0;
    for (std::size_t i = 6; i < 12; ++i)
        line2 += loads[ex.graph.index_of(testing::kExampleIds[i])];
    CHECK(line2 == 800);
}

TEST_CASE("plan fixed points and small cases")
{
    ClusterGraph two({{"a", Rational(5)}, {"b", Rational(5)}}, {{"a", "b", 1e6}}, 1000);
    const auto hg = embed(two);
    std::vector<PlacedTask> tasks;
    for (TaskId i = 1; i <= 10; ++i)
        tasks.push_back({i, 0, 1, 0});
    const auto s = plan(two, hg, tasks);
    CHECK(s.plan.moves.size() == 5);
    const auto balanced = scheduling::apply(s.plan, two, tasks);
    CHECK(node_loads(two, balanced) == std::vector<Units>{5, 5});
    CHECK(plan(two, hg, balanced).plan.empty());
    CHECK(plan(two, hg, std::vector<PlacedTask>{}).plan.empty());

    // indivisible task stays put
    std::vector<PlacedTask> big{{1, 0, 10, 0}};
    CHECK(plan(two, hg, big).plan.empty());
}

TEST_CASE("plan rejects bad input")
{
    ClusterGraph g({{"a", Rational(1)}, {"b", Rational(1)}, {"x", Rational(0)}}, {{"a", "b", 1.0}}, 8);
    const auto hg = embed(g, GridShape{{2}});
    std::vector<PlacedTask> dup{{1, 0, 1, 0}, {1, 1, 1, 0}};
    CHECK_THROWS_AS(plan(g, hg, dup), ValidationError);
    std::vector<PlacedTask> on_virtual{{1, 2, 1, 0}};
    CHECK_THROWS_AS(plan(g, hg, on_virtual), ValidationError);
    std::vector<PlacedTask> zero{{1, 0, 0, 0}};
    CHECK_THROWS_AS(plan(g, hg, zero), ValidationError);
    std::vector<PlacedTask> unknown{{1, 9, 1, 0}};
    CHECK_THROWS_AS(plan(g, hg, unknown), ValidationError);
}

TEST_CASE("apply")
{
    ClusterGraph g({{"a", Rational(1)}, {"b", Rational(1)}, {"x", Rational(0)}}, {{"a", "b", 1.0}}, 8);
    std::vector<PlacedTask> tasks{{1, 0, 3, 1}, {2, 0, 4, 2}};
    CHECK(scheduling::apply(MigrationPlan{}, g, tasks) == tasks);
    const auto moved = scheduling::apply(MigrationPlan{{{2, 0, 1}}, 4, 2}, g, tasks);
    CHECK(moved[0] == tasks[0]);
    CHECK(moved[1].node == 1);
    CHECK_THROWS_AS(scheduling::apply(MigrationPlan{{{3, 0, 1}}, 0, 0}, g, tasks), ValidationError);
    CHECK_THROWS_AS(scheduling::apply(MigrationPlan{{{1, 1, 0}}, 0, 0}, g, tasks), ValidationError);
    CHECK_THROWS_AS(scheduling::apply(MigrationPlan{{{1, 0, 2}}, 0, 0}, g, tasks), ValidationError);
    CHECK_THROWS_AS(scheduling::apply(MigrationPlan{{{1, 0, 7}}, 0, 0}, g, tasks), ValidationError);
    CHECK_THROWS_AS(scheduling::apply(MigrationPlan{{{1, 0, 1}, {1, 1, 0}}, 0, 0}, g, tasks), ValidationError);
}

TEST_CASE("plan properties on random systems")
{
    SplitMix64 rng(41);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 1 + rng.below(40);
        const auto g = testing::random_cluster(rng, n);
        const auto shape = n == 1 ? GridShape{{1}} : (rng.below(2) ? hypercube_shape(n) : GridShape{{n}});
        const auto hg = embed(g, shape);
        const bool unit = rng.below(3) == 0;
        auto tasks = testing::random_tasks(rng, g, rng.below(600), unit ? 1 : 1 + rng.below(200));
        Units bmax = 1, total = 0;
        for (const auto& t : tasks) {
            bmax = std::max(bmax, t.beta);
            total += t.beta;
        }

        const auto s = plan(g, hg, tasks);
        CHECK(plan(g, hg, tasks).plan == s.plan);
        const auto after = scheduling::apply(s.plan, g, tasks);
        REQUIRE(after.size() == tasks.size());
        for (std::size_t k = 0; k < tasks.size(); ++k) {
            CHECK(after[k].id == tasks[k].id);
            CHECK(after[k].beta == tasks[k].beta);
            CHECK(after[k].mu == tasks[k].mu);
        }
        const auto loads = node_loads(g, after);
        for (NodeIndex v = 0; v < g.nodes().size(); ++v)
            CHECK(testing::abs_diff(loads[v], testing::ideal_load(g, v, total)) < double(bmax));

        for (std::size_t i = 1; i < s.placements.size(); ++i) {
            CHECK(s.placements[i].first_unit > s.placements[i - 1].first_unit);
            CHECK(hg.rank_of(s.placements[i].to) >= hg.rank_of(s.placements[i - 1].to));
        }
        if (unit && !tasks.empty())
            CHECK(plan(g, hg, after).plan.empty());
    }
}
