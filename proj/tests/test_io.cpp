#include "support.hpp"

#include <doctest.h>

#include <limits>
#include <sstream>

using namespace psts;

namespace {

std::size_t columns(const std::string& line)
{
    std::size_t count = 1;
    bool quoted = false;
    for (char c : line) {
        if (c == '"')
            quoted = !quoted;
        else if (c == ',' && !quoted)
            ++count;
    }
    return count;
}

std::string error_of(const std::string& text, bool tasks = false)
{
    try {
        if (tasks)
            io::parse_tasks(text);
        else
            io::parse_topology(text);
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("fixture topology and tasks")
{
    const auto g = testing::example_cluster();
    CHECK(g.real_count() == 18);
    CHECK(g.total_power() == Rational(50));
    CHECK(g.packet_bits() == 1000);
    for (std::size_t i = 0; i < testing::kExampleIds.size(); ++i)
        CHECK(g.node(g.index_of(testing::kExampleIds[i])).tau == Rational(testing::kExampleTaus[i]));

    const auto tasks = testing::example_tasks();
    CHECK(tasks.size() == 4000);
    const auto loads = scheduling::node_loads(g, io::place(g, tasks));
    for (std::size_t i = 0; i < testing::kExampleIds.size(); ++i)
        CHECK(loads[g.index_of(testing::kExampleIds[i])] == testing::kExampleLoads[i]);
}

TEST_CASE("topology parsing")
{
    const auto g = io::parse_topology("# comment\npacketbits 64\nnode a 3/2\nnode b 0.25 # trailing\n\nlink a b inf\n");
    CHECK(g.node(g.index_of("a")).tau == Rational(3, 2));
    CHECK(g.node(g.index_of("b")).tau == Rational(1, 4));
    CHECK(g.links().front().bandwidth == std::numeric_limits<double>::infinity());

    CHECK(error_of("packetbits 8\nnode a -1\n") == "line 2: node 'a' needs a positive power, got '-1'");
    CHECK(error_of("packetbits 8\nnode a 0\n").rfind("line 2:", 0) == 0);
    CHECK(error_of("packetbits 8\nnode a 1\nnode b 1\nlink a b -5\n").rfind("line 4:", 0) == 0);
    CHECK(error_of("packetbits 8\nnode a 1\nnode b 1\nlink a b\n").rfind("line 4:", 0) == 0);
    CHECK(error_of("packetbits 8\nwire a b 1\n").rfind("line 2:", 0) == 0);
    CHECK(error_of("packetbits 8\npacketbits 9\nnode a 1\n").rfind("line 2:", 0) == 0);
    CHECK_FALSE(error_of("node a 1\n").empty());
    CHECK_FALSE(error_of("packetbits 8\nnode a 1\nnode b 1\n").empty()); // disconnected
    CHECK_FALSE(error_of("packetbits 8\nnode a 1\nnode a 2\n").empty());
    CHECK_THROWS_AS(io::parse_topology("packetbits 8\nnode a x\n"), ParseError);
}

TEST_CASE("task parsing")
{
    const auto t = io::parse_tasks("task 7 a 10 2 0.5\n# none\ntask 3 b 1 0 0\n");
    REQUIRE(t.size() == 2);
    CHECK(t[0] == TaskSpec{7, "a", 10, 2, 0.5});
    CHECK(io::parse_tasks("# empty\n").empty());
    CHECK(error_of("task 1 a 0 0 0\n", true).rfind("line 1:", 0) == 0);
    CHECK(error_of("task 1 a 1 -1 0\n", true).rfind("line 1:", 0) == 0);
    CHECK(error_of("task 1 a 1 0 -2\n", true).rfind("line 1:", 0) == 0);
    CHECK(error_of("task 1 a 1 0 0\ntask 1 b 1 0 0\n", true).rfind("line 2:", 0) == 0);
    CHECK(error_of("task x a 1 0 0\n", true).rfind("line 1:", 0) == 0);
    CHECK(error_of("task 1 a 1 0\n", true).rfind("line 1:", 0) == 0);

    const auto g = testing::example_cluster();
    CHECK_THROWS_AS(io::place(g, {{1, "nowhere", 1, 0, 0.0}}), ValidationError);
}

TEST_CASE("round trips")
{
    SplitMix64 rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = testing::random_cluster(rng, 1 + rng.below(30));
        std::vector<NodeSpec> nodes;
        for (const auto& v : g.nodes())
            nodes.push_back({v.id, v.tau / Rational(rng.uniform_int(1, 7))});
        std::vector<LinkSpec> links;
        for (const auto& l : g.links())
            links.push_back({l.a, l.b, rng.below(4) == 0 ? kUnboundedBandwidth : l.bandwidth / 3.0});
        const ClusterGraph h(nodes, links, 1 + rng.below(100000));
        const auto text = io::serialize_topology(h);
        CHECK(io::parse_topology(text) == h);
        CHECK(io::serialize_topology(io::parse_topology(text)) == text);

        std::vector<TaskSpec> tasks;
        for (std::size_t k = 0; k < rng.below(50); ++k)
            tasks.push_back({rng.next(), nodes[rng.below(nodes.size())].id, rng.uniform_int(1, 1000),
                             rng.uniform_int(0, 50), 1e3 * rng.uniform01()});
        CHECK(io::parse_tasks(io::serialize_tasks(tasks)) == tasks);
    }
    const auto g = testing::example_cluster();
    CHECK(io::parse_topology(io::serialize_topology(g)) == g);
}

TEST_CASE("plan and load output")
{
    const auto g = testing::example_cluster();
    const auto tasks = io::place(g, testing::example_tasks());
    const auto hg = embed(g, GridShape{{3, 6}});
    const auto schedule = scheduling::plan(g, hg, tasks);
    const auto text = io::format_plan(g, schedule.plan);
    std::istringstream in(text);
    std::string line;
    std::size_t moves = 0;
    std::string last;
    while (std::getline(in, line)) {
        if (line.rfind("move ", 0) == 0)
            ++moves;
        last = line;
    }
    CHECK(moves == schedule.plan.moves.size());
    CHECK(last == "summary units=2200 packets=2200 moves=2200");

    const auto loads = scheduling::node_loads(g, tasks);
    const auto csv = io::format_loads(g, loads);
    CHECK(csv.rfind("node,tau,load\nv11,3,250\n", 0) == 0);
}

TEST_CASE("report and cost rows")
{
    CHECK(columns(io::kReportHeader) == 14);
    sim::SimulationReport r;
    r.policy = "on-arrival:0.1";
    r.n_nodes = 4;
    r.dims = "2x2";
    const auto row = io::report_row(r, 1.5, std::nullopt);
    CHECK(columns(row) == 14);
    CHECK(row.rfind("\"on-arrival:0.1\",4,2x2,", 0) == 0);
    CHECK(row.substr(row.size() - 6) == ",1.5,\n");

    const auto table = io::format_cost_table(cost::verify_optimality(18, {1, 1}));
    std::istringstream in(table);
    std::string line;
    std::getline(in, line);
    CHECK(line == "dims,capacity,steps,total_seconds");
    std::getline(in, line);
    CHECK(line == "2x2x2x2x2,32,10,20");
    while (std::getline(in, line))
        CHECK(columns(line) == 4);

    CHECK(io::format_number(0.1) == "0.1");
    CHECK(io::format_number(kUnboundedBandwidth) == "inf");
}
