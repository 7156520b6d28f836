#include "psts/cli.hpp"

#include "psts/cost_model.hpp"
#include "psts/crossover.hpp"
#include "psts/error.hpp"
#include "psts/io.hpp"
#include "psts/scheduling.hpp"
#include "psts/simulator.hpp"

#include <CLI11.hpp>

#include <sstream>

namespace psts::cli {

namespace {

struct Usage : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

ClusterGraph load_topology(const RunConfig& c)
{
    if (!c.topology)
        throw Usage(c.command + " needs --topology");
    return io::parse_topology(io::read_file(*c.topology));
}

std::optional<GridShape> shape_of(const RunConfig& c)
{
    if (!c.shape)
        return std::nullopt;
    return parse_shape(*c.shape);
}

std::vector<TaskSpec> load_tasks(const RunConfig& c, const ClusterGraph& graph)
{
    if (c.tasks.has_value() == c.gen.has_value())
        throw Usage(c.command + " needs exactly one of --tasks and --gen");
    if (c.tasks)
        return io::parse_tasks(io::read_file(*c.tasks));
    std::vector<std::string> ids;
    for (const auto& n : graph.nodes())
        ids.push_back(n.id);
    return sim::generate_workload(sim::parse_workload(*c.gen, c.seed), ids);
}

sim::ShapeFamily family_of(const std::string& name)
{
    if (name == "hypercube")
        return sim::ShapeFamily::Hypercube;
    if (name == "line")
        return sim::ShapeFamily::Line;
    throw Usage("unknown shape family '" + name + "' (hypercube, line)");
}

std::string balance(const RunConfig& c)
{
    const auto graph = load_topology(c);
    if (!c.tasks)
        throw Usage("balance needs --tasks");
    const auto specs = io::parse_tasks(io::read_file(*c.tasks));
    const auto tasks = io::place(graph, specs);
    const auto hg = embed(graph, shape_of(c));
    const auto schedule = scheduling::plan(graph, hg, tasks);
    const auto loads = scheduling::node_loads(graph, scheduling::apply(schedule.plan, graph, tasks));
    if (c.format == "plan") {
        std::string out = io::format_plan(graph, schedule.plan);
        for (NodeIndex i = 0; i < graph.nodes().size(); ++i)
            out += "load " + graph.node(i).id + " " + std::to_string(loads[i]) + "\n";
        return out;
    }
    return io::format_loads(graph, loads);
}

std::string simulate(const RunConfig& c)
{
    const auto graph = load_topology(c);
    const auto tasks = load_tasks(c, graph);
    const auto hg = embed(graph, shape_of(c));
    const auto costs = cost::calibrate_costs(graph, c.p, c.q);
    const auto policy = sim::parse_policy(c.policy);
    const auto none = sim::simulate(graph, hg, tasks, sim::Policy::none(), costs, c.seed);
    std::string out = std::string(io::kReportHeader) + "\n" + io::report_row(none, 1.0, std::nullopt);
    if (policy.kind != sim::Policy::Kind::None) {
        const auto psts = sim::simulate(graph, hg, tasks, policy, costs, c.seed);
        out += io::report_row(psts, sim::speedup(none, psts), std::nullopt);
    }
    return out;
}

std::string sweep(const RunConfig& c)
{
    if (!c.gen)
        throw Usage("sweep needs --gen");
    sim::SweepConfig config;
    if (!c.nodes.empty())
        config.node_counts = c.nodes;
    config.shapes.clear();
    for (const auto& s : c.shapes)
        config.shapes.push_back(family_of(s));
    config.workload = sim::parse_workload(*c.gen, c.seed);
    if (c.p || c.q)
        config.costs = cost::StepCosts{c.p.value_or(0.0), c.q.value_or(0.0)};
    config.policy = sim::parse_policy(c.policy);
    config.seed = c.seed;
    std::string out = std::string(io::kReportHeader) + "\n";
    for (const auto& row : sim::sweep(config))
        out += io::report_row(row.psts, row.speedup, row.crossover);
    return out;
}

std::string crossover(const RunConfig& c)
{
    if (!c.gen)
        throw Usage("crossover needs --gen");
    cost::CrossoverMode mode;
    if (c.mode == "backlog")
        mode = cost::CrossoverMode::Backlog;
    else if (c.mode == "arrival")
        mode = cost::CrossoverMode::Arrival;
    else
        throw Usage("unknown crossover mode '" + c.mode + "' (backlog, arrival)");

    std::vector<ClusterGraph> clusters;
    if (c.topology) {
        clusters.push_back(load_topology(c));
    } else {
        if (c.nodes.empty())
            throw Usage("crossover needs --topology or --nodes");
        for (auto n : c.nodes)
            clusters.push_back(sim::make_cluster(n, c.seed + n));
    }
    std::string out = "n_nodes,dims,mode,status,phi,skew,iterations,monotone\n";
    for (const auto& graph : clusters) {
        std::vector<GridShape> shapes;
        if (c.shape)
            shapes.push_back(parse_shape(*c.shape));
        else
            for (const auto& s : c.shapes)
                shapes.push_back(family_of(s) == sim::ShapeFamily::Line || graph.real_count() < 2
                                     ? GridShape{{graph.real_count()}}
                                     : hypercube_shape(graph.real_count()));
        for (const auto& shape : shapes) {
            cost::CrossoverQuery q;
            q.cluster = &graph;
            q.shape = shape;
            q.workload = sim::parse_workload(*c.gen, c.seed);
            q.seed = c.seed;
            q.costs = cost::calibrate_costs(graph, c.p, c.q);
            q.mode = mode;
            const auto r = cost::estimate_crossover(q);
            out += std::to_string(graph.real_count()) + "," + shape.to_string() + "," + c.mode + "," +
                   cost::to_string(r.status) + "," + io::format_number(r.phi) + "," + io::format_number(r.skew) +
                   "," + std::to_string(r.iterations) + "," + (r.monotone ? "true" : "false") + "\n";
        }
    }
    return out;
}

std::string cost_table(const RunConfig& c)
{
    std::size_t n = 0;
    cost::StepCosts costs{c.p.value_or(1.0), c.q.value_or(1.0)};
    if (c.topology) {
        const auto graph = load_topology(c);
        n = graph.real_count();
        costs = cost::calibrate_costs(graph, c.p, c.q);
    } else if (c.nodes.size() == 1) {
        n = c.nodes.front();
    } else {
        throw Usage("cost needs --topology or a single --nodes value");
    }
    if (n < 2)
        throw ValidationError("cost table needs at least two real nodes");
    return io::format_cost_table(cost::verify_optimality(n, costs));
}

} // namespace

int run(const RunConfig& c, std::ostream& out)
{
    if (c.format != "csv" && c.format != "plan")
        throw Usage("unknown format '" + c.format + "' (csv, plan)");
    std::string text;
    if (c.command == "balance")
        text = balance(c);
    else if (c.command == "simulate")
        text = simulate(c);
    else if (c.command == "sweep")
        text = sweep(c);
    else if (c.command == "crossover")
        text = crossover(c);
    else if (c.command == "cost")
        text = cost_table(c);
    else
        throw Usage("unknown command '" + c.command + "'");
    if (c.out)
        io::write_file(*c.out, text);
    else
        out << text;
    return kOk;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig c;
    CLI::App app{"Positional scan task scheduling toolkit"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--topology", c.topology, "Topology file");
        sub->add_option("--shape", c.shape, "Grid shape, e.g. 3x6");
        sub->add_option("--p", c.p, "Seconds per communication step");
        sub->add_option("--q", c.q, "Seconds per computation step");
        sub->add_option("--seed", c.seed, "Master seed");
        sub->add_option("--out", c.out, "Output file (default stdout)");
        sub->add_option("--format", c.format, "csv or plan");
    };
    auto workload = [&](CLI::App* sub) {
        auto* tasks = sub->add_option("--tasks", c.tasks, "Task file");
        auto* gen = sub->add_option("--gen", c.gen, "Generator, e.g. m=4000,beta=uniform:1:100,mu=const:5");
        tasks->excludes(gen);
    };

    auto* balance = app.add_subcommand("balance", "Plan one pass and print moves and final loads");
    common(balance);
    balance->add_option("--tasks", c.tasks, "Task file");

    auto* simulate = app.add_subcommand("simulate", "Simulate without and with rebalancing");
    common(simulate);
    workload(simulate);
    simulate->add_option("--policy", c.policy, "none, at:T or on-arrival:PHI");

    auto* sweep = app.add_subcommand("sweep", "Simulate generated clusters over node counts and shapes");
    common(sweep);
    sweep->add_option("--gen", c.gen, "Generator spec");
    sweep->add_option("--nodes", c.nodes, "Node counts")->delimiter(',');
    sweep->add_option("--shapes", c.shapes, "Shape families")->delimiter(',');
    sweep->add_option("--policy", c.policy, "none, at:T or on-arrival:PHI");

    auto* crossover = app.add_subcommand("crossover", "Estimate the imbalance at which a pass pays off");
    common(crossover);
    crossover->add_option("--gen", c.gen, "Generator spec");
    crossover->add_option("--nodes", c.nodes, "Node counts of generated clusters")->delimiter(',');
    crossover->add_option("--shapes", c.shapes, "Shape families")->delimiter(',');
    crossover->add_option("--mode", c.mode, "backlog or arrival");

    auto* cost = app.add_subcommand("cost", "Cost of every grid shape for a node count");
    common(cost);
    cost->add_option("--nodes", c.nodes, "Real node count")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    for (auto* sub : app.get_subcommands())
        c.command = sub->get_name();

    try {
        return run(c, out);
    } catch (const Usage& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
}

} // namespace psts::cli
