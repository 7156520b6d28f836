#include "support.hpp"

#include "psts/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace psts;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "psts");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::main(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text)
{
    const auto path = (std::filesystem::temp_directory_path() / ("psts_cli_" + name)).string();
    io::write_file(path, text);
    return path;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

const std::string kTopo = testing::data_path("example_topology.txt");
const std::string kTasks = testing::data_path("example_tasks.txt");

} // namespace

TEST_CASE("balance reaches the exact split on the fixture")
{
    const auto r = invoke({"balance", "--topology", kTopo, "--tasks", kTasks, "--shape", "3x6"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 19);
    CHECK(rows[0] == "node,tau,load");
    for (std::size_t i = 0; i < testing::kExampleIds.size(); ++i)
        CHECK(rows[i + 1] == testing::kExampleIds[i] + "," + std::to_string(testing::kExampleTaus[i]) + "," +
                                 std::to_string(80 * testing::kExampleTaus[i]));

    const auto plan = invoke({"balance", "--topology", kTopo, "--tasks", kTasks, "--shape", "3x6", "--format", "plan"});
    REQUIRE(plan.code == 0);
    CHECK(plan.out.find("summary units=2200 packets=2200 moves=2200\n") != std::string::npos);
    CHECK(plan.out.find("load v35 480\n") != std::string::npos);
    CHECK(invoke({"balance", "--topology", kTopo, "--tasks", kTasks, "--shape", "3x6"}).out == r.out);
}

TEST_CASE("cost table")
{
    const auto r = invoke({"cost", "--nodes", "18"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    CHECK(rows[0] == "dims,capacity,steps,total_seconds");
    CHECK(rows[1] == "2x2x2x2x2,32,10,20");
    CHECK(invoke({"cost", "--nodes", "18", "--p", "0.5", "--q", "0"}).out.find("2x2x2x2x2,32,10,5\n") !=
          std::string::npos);
    const auto calibrated = invoke({"cost", "--topology", kTopo});
    REQUIRE(calibrated.code == 0);
    CHECK(lines(calibrated.out)[1].rfind("2x2x2x2x2,32,10,", 0) == 0);
}

TEST_CASE("simulate")
{
    const auto topo = temp_file("pair.txt", "packetbits 1000\nnode a 5\nnode b 5\nlink a b inf\n");
    std::string tasks;
    for (int i = 1; i <= 100; ++i)
        tasks += "task " + std::to_string(i) + " a 1 0 0\n";
    const auto task_file = temp_file("pair_tasks.txt", tasks);
    const auto r = invoke({"simulate", "--topology", topo, "--tasks", task_file, "--policy", "at:0", "--p", "0", "--q", "0"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == io::kReportHeader);
    CHECK(rows[1].rfind("\"none\",2,2,100,1,20,", 0) == 0);
    CHECK(rows[2].rfind("\"psts_at(0)\",2,2,100,1,10,", 0) == 0);
    CHECK(rows[2].substr(rows[2].size() - 3) == ",2,");

    const auto empty = temp_file("empty_tasks.txt", "# nothing\n");
    const auto e = invoke({"simulate", "--topology", topo, "--tasks", empty});
    REQUIRE(e.code == 0);
    CHECK(lines(e.out)[1].rfind("\"none\",2,2,0,1,0,", 0) == 0);

    const auto gen = invoke({"simulate", "--topology", kTopo, "--gen", "m=500,beta=uniform:1:20,arrivals=window:0:5",
                             "--seed", "4"});
    REQUIRE(gen.code == 0);
    CHECK(invoke({"simulate", "--topology", kTopo, "--gen", "m=500,beta=uniform:1:20,arrivals=window:0:5", "--seed",
                  "4"})
              .out == gen.out);

    const auto out_path = (std::filesystem::temp_directory_path() / "psts_cli_report.csv").string();
    const auto to_file = invoke({"simulate", "--topology", topo, "--tasks", task_file, "--out", out_path});
    REQUIRE(to_file.code == 0);
    CHECK(to_file.out.empty());
    CHECK(lines(io::read_file(out_path)).size() == 3);
}

TEST_CASE("sweep and crossover commands")
{
    const auto s = invoke({"sweep", "--gen", "m=200,beta=uniform:1:10,arrivals=window:0:10", "--nodes", "2,4",
                           "--shapes", "hypercube"});
    REQUIRE(s.code == 0);
    CHECK(lines(s.out).size() == 3);

    const auto c = invoke({"crossover", "--gen", "m=400,beta=const:1", "--nodes", "4,8", "--mode", "arrival"});
    REQUIRE(c.code == 0);
    const auto rows = lines(c.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "n_nodes,dims,mode,status,phi,skew,iterations,monotone");
    CHECK(rows[1].rfind("4,2x2,arrival,", 0) == 0);
    CHECK(rows[2].rfind("4,4,arrival,", 0) == 0);
}

TEST_CASE("exit codes")
{
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    CHECK(invoke({"balance", "--tasks", kTasks}).code == 1);
    CHECK(invoke({"simulate", "--topology", kTopo}).code == 1);
    CHECK(invoke({"sweep", "--shapes", "ring", "--gen", "m=3"}).code == 1);
    CHECK(invoke({"balance", "--topology", kTopo, "--tasks", kTasks, "--shape", "2x2"}).code == 2);
    CHECK(invoke({"balance", "--topology", "/nonexistent/topology.txt", "--tasks", kTasks}).code == 2);
    const auto bad = temp_file("bad.txt", "packetbits 8\nnode a -1\n");
    const auto r = invoke({"balance", "--topology", bad, "--tasks", kTasks});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK(invoke({"simulate", "--topology", kTopo, "--gen", "m=0"}).code == 2);
    CHECK(invoke({"simulate", "--topology", kTopo, "--gen", "m=5", "--policy", "later"}).code == 2);
}
