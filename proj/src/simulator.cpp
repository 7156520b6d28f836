#include "psts/simulator.hpp"

#include "psts/crossover.hpp"
#include "psts/error.hpp"
#include "psts/random.hpp"
#include "psts/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>
#include <unordered_set>

namespace psts::sim {

namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

double parse_number(const std::string& text, const std::string& context)
{
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size())
            throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("malformed number '" + text + "' in " + context);
    }
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, sep))
        out.push_back(part);
    return out;
}

Distribution parse_distribution(const std::string& text)
{
    auto parts = split(text, ':');
    if (parts.size() == 3 && parts[0] == "uniform")
        return {Distribution::Kind::Uniform, parse_number(parts[1], text), parse_number(parts[2], text)};
    if (parts.size() == 2 && parts[0] == "poisson")
        return Distribution::poisson(parse_number(parts[1], text));
    if (parts.size() == 2 && parts[0] == "const") {
        double v = parse_number(parts[1], text);
        return {Distribution::Kind::Uniform, v, v};
    }
    throw ValidationError("unknown distribution '" + text + "' (uniform:LO:HI, poisson:MEAN or const:V)");
}

void validate(const Distribution& d, const std::string& name)
{
    if (d.kind == Distribution::Kind::Uniform) {
        if (d.a < 0 || d.b < d.a || d.a != std::floor(d.a) || d.b != std::floor(d.b))
            throw ValidationError(name + ": uniform bounds must be integers with 0 <= lo <= hi");
    } else if (!(d.a > 0)) {
        throw ValidationError(name + ": poisson mean must be positive");
    }
}

std::int64_t draw(SplitMix64& rng, const Distribution& d)
{
    if (d.kind == Distribution::Kind::Uniform)
        return rng.uniform_int(static_cast<std::int64_t>(d.a), static_cast<std::int64_t>(d.b));
    return rng.poisson(d.a);
}

} // namespace

std::string Distribution::to_string() const
{
    if (kind == Kind::Poisson)
        return "poisson:" + fmt(a);
    return "uniform:" + fmt(a) + ":" + fmt(b);
}

std::string ArrivalProcess::to_string() const
{
    if (kind == Kind::Poisson)
        return "poisson:" + fmt(rate) + ":" + fmt(start);
    return "window:" + fmt(start) + ":" + fmt(end);
}

void validate(const WorkloadSpec& spec)
{
    if (spec.m < 1)
        throw ValidationError("workload needs at least one task");
    validate(spec.beta, "beta");
    validate(spec.mu, "mu");
    const auto& a = spec.arrivals;
    if (a.kind == ArrivalProcess::Kind::Poisson) {
        if (!(a.rate > 0) || !(a.start >= 0))
            throw ValidationError("poisson arrivals need a positive rate and a non-negative start");
    } else if (!(a.start >= 0) || !(a.end >= a.start)) {
        throw ValidationError("arrival window needs 0 <= start <= end");
    }
}

WorkloadSpec parse_workload(const std::string& text, std::uint64_t seed)
{
    WorkloadSpec spec;
    spec.seed = seed;
    bool have_m = false;
    for (const auto& item : split(text, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ValidationError("generator item '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "m") {
            double m = parse_number(value, "m");
            if (m < 1 || m != std::floor(m))
                throw ValidationError("m must be a positive integer");
            spec.m = static_cast<std::size_t>(m);
            have_m = true;
        } else if (key == "beta") {
            spec.beta = parse_distribution(value);
        } else if (key == "mu") {
            spec.mu = parse_distribution(value);
        } else if (key == "arrivals") {
            auto parts = split(value, ':');
            if (parts.size() == 3 && parts[0] == "window")
                spec.arrivals = ArrivalProcess::window(parse_number(parts[1], value), parse_number(parts[2], value));
            else if ((parts.size() == 2 || parts.size() == 3) && parts[0] == "poisson")
                spec.arrivals = ArrivalProcess::poisson(parse_number(parts[1], value),
                                                        parts.size() == 3 ? parse_number(parts[2], value) : 0.0);
            else
                throw ValidationError("unknown arrival process '" + value + "' (window:START:END or poisson:RATE[:START])");
        } else {
            throw ValidationError("unknown generator key '" + key + "'");
        }
    }
    if (!have_m)
        throw ValidationError("generator spec needs m=<count>");
    validate(spec);
    return spec;
}

std::vector<TaskSpec> generate_workload(const WorkloadSpec& spec, std::span<const std::string> nodes)
{
    validate(spec);
    if (nodes.empty())
        throw ValidationError("workload needs at least one node");
    SplitMix64 beta_rng(derive_seed(spec.seed, 1));
    SplitMix64 mu_rng(derive_seed(spec.seed, 2));
    SplitMix64 arrival_rng(derive_seed(spec.seed, 3));
    SplitMix64 origin_rng(derive_seed(spec.seed, 4));

    std::vector<double> arrivals(spec.m);
    if (spec.arrivals.kind == ArrivalProcess::Kind::Poisson) {
        double t = spec.arrivals.start;
        for (auto& a : arrivals) {
            t += arrival_rng.exponential(spec.arrivals.rate);
            a = t;
        }
    } else {
        const double width = spec.arrivals.end - spec.arrivals.start;
        for (auto& a : arrivals)
            a = spec.arrivals.start + width * arrival_rng.uniform01();
        std::sort(arrivals.begin(), arrivals.end());
    }

    std::vector<TaskSpec> tasks(spec.m);
    for (std::size_t i = 0; i < spec.m; ++i) {
        auto& t = tasks[i];
        t.id = i + 1;
        t.beta = std::max<std::int64_t>(1, draw(beta_rng, spec.beta));
        t.mu = std::max<std::int64_t>(0, draw(mu_rng, spec.mu));
        t.arrival = arrivals[i];
        t.origin = nodes[origin_rng.below(nodes.size())];
    }
    return tasks;
}

ClusterGraph make_cluster(std::size_t n, std::uint64_t seed)
{
    if (n < 1)
        throw ValidationError("cluster needs at least one node");
    SplitMix64 rng(derive_seed(seed, 10));
    const std::size_t width = std::max<std::size_t>(2, std::to_string(n - 1).size());
    std::vector<NodeSpec> nodes;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string digits = std::to_string(i);
        nodes.push_back({"v" + std::string(width - digits.size(), '0') + digits, Rational(rng.uniform_int(1, 10))});
    }
    std::vector<LinkSpec> links;
    std::unordered_set<std::uint64_t> present;
    auto add = [&](std::size_t a, std::size_t b) {
        if (a == b)
            return;
        auto key = static_cast<std::uint64_t>(std::min(a, b)) * n + std::max(a, b);
        if (!present.insert(key).second)
            return;
        links.push_back({nodes[a].id, nodes[b].id, static_cast<double>(rng.uniform_int(10'000'000, 100'000'000))});
    };
    for (std::size_t i = 1; i < n; ++i)
        add(i, rng.below(i));
    for (std::size_t k = 0; k < n / 2; ++k)
        add(rng.below(n), rng.below(n));
    return ClusterGraph(std::move(nodes), std::move(links), 12000);
}

std::string Policy::label() const
{
    switch (kind) {
    case Kind::None:
        return "none";
    case Kind::PstsAt:
        return "psts_at(" + fmt(time) + ")";
    case Kind::PstsOnArrival:
        return "psts_on_arrival(" + fmt(threshold) + ")";
    }
    return "?";
}

Policy parse_policy(const std::string& text)
{
    if (text == "none")
        return Policy::none();
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string kind = text.substr(0, colon);
        const double v = parse_number(text.substr(colon + 1), "policy");
        if (kind == "at") {
            if (!(v >= 0))
                throw ValidationError("psts_at time must be non-negative");
            return Policy::psts_at(v);
        }
        if (kind == "on-arrival") {
            if (!(v >= 0))
                throw ValidationError("psts_on_arrival threshold must be non-negative");
            return Policy::psts_on_arrival(v);
        }
    }
    throw ValidationError("unknown policy '" + text + "' (none, at:T, on-arrival:PHI)");
}

double imbalance(const ClusterGraph& cluster, std::span<const Units> node_loads)
{
    if (node_loads.size() != cluster.nodes().size())
        throw ValidationError("load vector does not match the cluster");
    double total = 0.0;
    double worst = 0.0;
    for (NodeIndex i = 0; i < node_loads.size(); ++i) {
        const auto& n = cluster.node(i);
        if (n.is_virtual()) {
            if (node_loads[i] != 0)
                throw ValidationError("virtual node '" + n.id + "' carries load");
            continue;
        }
        total += static_cast<double>(node_loads[i]);
        worst = std::max(worst, static_cast<double>(node_loads[i]) / to_double(n.tau));
    }
    if (total == 0.0)
        return 0.0;
    const double ideal = total / to_double(cluster.total_power());
    return (worst - ideal) / ideal;
}

namespace {

enum class EventKind { Completion = 0, Arrival = 1, Pass = 2, Wake = 3 };

struct Event {
    double time;
    EventKind kind;
    std::uint64_t seq;
    std::size_t payload;
    std::uint64_t version;
};

struct Later {
    bool operator()(const Event& a, const Event& b) const
    {
        if (a.time != b.time)
            return a.time > b.time;
        if (a.kind != b.kind)
            return a.kind > b.kind;
        return a.seq > b.seq;
    }
};

enum class Status { Pending, Queued, Running, Done };

struct TaskState {
    NodeIndex node = 0;
    double eligible = 0.0;
    double completion = 0.0;
    Status status = Status::Pending;
};

struct NodeState {
    double tau = 0.0;
    std::vector<std::size_t> queue;
    std::optional<std::size_t> running;
    // completions of a busy run are anchor_time + units / tau, so that
    // back-to-back services do not accumulate rounding error
    double anchor_time = 0.0;
    Units anchor_units = 0;
    double anchor_end = -1.0;
    std::uint64_t version = 0;
};

class Engine {
public:
    Engine(const ClusterGraph& cluster, const HyperGrid& hg, std::span<const TaskSpec> tasks, const Policy& policy,
           const cost::StepCosts& costs)
        : cluster_(cluster), hg_(hg), specs_(tasks), policy_(policy), costs_(costs),
          bandwidth_(bottleneck_table(cluster)), tasks_(tasks.size()), nodes_(cluster.nodes().size())
    {
        cost::validate(costs);
        for (NodeIndex i = 0; i < nodes_.size(); ++i)
            nodes_[i].tau = to_double(cluster.node(i).tau);
        std::unordered_set<TaskId> ids;
        for (std::size_t k = 0; k < tasks.size(); ++k) {
            const auto& t = tasks[k];
            if (!ids.insert(t.id).second)
                throw ValidationError("duplicate task id " + std::to_string(t.id));
            const NodeIndex origin = cluster.index_of(t.origin);
            if (cluster.node(origin).is_virtual())
                throw ValidationError("task " + std::to_string(t.id) + " originates on virtual node '" + t.origin + "'");
            hg.rank_of(origin);
            if (t.beta < 1 || t.mu < 0 || !(t.arrival >= 0) || !std::isfinite(t.arrival))
                throw ValidationError("task " + std::to_string(t.id) + " has invalid parameters");
            tasks_[k].node = origin;
            push(t.arrival, EventKind::Arrival, k);
        }
        if (policy.kind == Policy::Kind::PstsAt) {
            if (!(policy.time >= 0))
                throw ValidationError("psts_at time must be non-negative");
            push(policy.time, EventKind::Pass, 0);
        }
    }

    SimulationReport run()
    {
        while (!events_.empty()) {
            const double now = events_.top().time;
            bool arrived = false;
            while (!events_.empty() && events_.top().time == now) {
                Event e = events_.top();
                events_.pop();
                switch (e.kind) {
                case EventKind::Completion:
                    complete(e, now);
                    break;
                case EventKind::Arrival:
                    arrive(e.payload, now);
                    arrived = true;
                    break;
                case EventKind::Pass:
                    rebalance(now);
                    break;
                case EventKind::Wake:
                    break;
                }
            }
            if (arrived && policy_.kind == Policy::Kind::PstsOnArrival && now >= frozen_until_ &&
                current_imbalance(now) > policy_.threshold)
                rebalance(now);
            for (NodeIndex i = 0; i < nodes_.size(); ++i)
                try_start(i, now);
        }

        SimulationReport r;
        r.policy = policy_.label();
        r.n_nodes = cluster_.real_count();
        r.dims = hg_.shape().to_string();
        r.m_tasks = specs_.size();
        r.response.resize(specs_.size());
        for (std::size_t k = 0; k < specs_.size(); ++k) {
            if (tasks_[k].status != Status::Done)
                throw std::logic_error("simulation ended with unfinished tasks");
            r.makespan = std::max(r.makespan, tasks_[k].completion);
            r.response[k] = tasks_[k].completion - specs_[k].arrival;
            r.max_response = std::max(r.max_response, r.response[k]);
            r.mean_response += r.response[k];
        }
        if (!specs_.empty())
            r.mean_response /= static_cast<double>(specs_.size());
        r.overhead = overhead_;
        r.migrated_units = migrated_units_;
        r.migrated_packets = migrated_packets_;
        r.passes = passes_;
        r.executed_units = executed_;
        std::vector<Units> initial(cluster_.nodes().size(), 0);
        for (std::size_t k = 0; k < specs_.size(); ++k)
            initial[cluster_.index_of(specs_[k].origin)] += specs_[k].beta;
        r.imbalance = imbalance(cluster_, initial);
        return r;
    }

private:
    void push(double time, EventKind kind, std::size_t payload, std::uint64_t version = 0)
    {
        events_.push({time, kind, seq_++, payload, version});
    }

    void arrive(std::size_t k, double now)
    {
        auto& t = tasks_[k];
        t.status = Status::Queued;
        t.eligible = now;
        nodes_[t.node].queue.push_back(k);
    }

    void complete(const Event& e, double now)
    {
        auto& node = nodes_[e.payload];
        if (e.version != node.version || !node.running)
            return;
        auto& t = tasks_[*node.running];
        t.status = Status::Done;
        t.completion = now;
        executed_ += specs_[*node.running].beta;
        node.running.reset();
    }

    void try_start(NodeIndex i, double now)
    {
        auto& node = nodes_[i];
        if (node.running || now < frozen_until_ || node.queue.empty())
            return;
        auto it = std::find_if(node.queue.begin(), node.queue.end(),
                               [&](std::size_t k) { return tasks_[k].eligible <= now; });
        if (it == node.queue.end()) {
            double next = tasks_[node.queue.front()].eligible;
            for (auto k : node.queue)
                next = std::min(next, tasks_[k].eligible);
            push(next, EventKind::Wake, i);
            return;
        }
        const std::size_t k = *it;
        node.queue.erase(it);
        const Units beta = specs_[k].beta;
        if (node.anchor_end == now) {
            node.anchor_units += beta;
        } else {
            node.anchor_time = now;
            node.anchor_units = beta;
        }
        auto& t = tasks_[k];
        t.status = Status::Running;
        t.completion = node.anchor_time + static_cast<double>(node.anchor_units) / node.tau;
        node.anchor_end = t.completion;
        node.running = k;
        push(t.completion, EventKind::Completion, i, ++node.version);
    }

    double current_imbalance(double now) const
    {
        double total = 0.0;
        double worst = 0.0;
        for (const auto& node : nodes_) {
            if (node.tau == 0.0)
                continue;
            double load = 0.0;
            for (auto k : node.queue)
                load += static_cast<double>(specs_[k].beta);
            if (node.running)
                load += (tasks_[*node.running].completion - now) * node.tau;
            total += load;
            worst = std::max(worst, load / node.tau);
        }
        if (total <= 0.0)
            return 0.0;
        const double ideal = total / to_double(cluster_.total_power());
        return (worst - ideal) / ideal;
    }

    void rebalance(double now)
    {
        ++passes_;
        const double pass_cost = cost::algorithm_cost(hg_.shape(), costs_);

        std::vector<PlacedTask> placed;
        std::unordered_set<TaskId> pinned;
        std::vector<std::size_t> by_id_index;
        for (NodeIndex i = 0; i < nodes_.size(); ++i) {
            const auto& node = nodes_[i];
            if (node.running) {
                const std::size_t k = *node.running;
                const double remaining = (tasks_[k].completion - now) * node.tau;
                const Units units = std::max<Units>(1, static_cast<Units>(std::llround(remaining)));
                placed.push_back({specs_[k].id, i, units, specs_[k].mu});
                pinned.insert(specs_[k].id);
            }
            for (auto k : node.queue)
                placed.push_back({specs_[k].id, i, specs_[k].beta, specs_[k].mu});
        }

        if (pass_cost > 0.0) {
            frozen_until_ = now + pass_cost;
            for (NodeIndex i = 0; i < nodes_.size(); ++i) {
                auto& node = nodes_[i];
                if (node.running) {
                    auto& t = tasks_[*node.running];
                    t.completion += pass_cost;
                    node.anchor_time += pass_cost;
                    node.anchor_end = t.completion;
                    push(t.completion, EventKind::Completion, i, ++node.version);
                }
                push(frozen_until_, EventKind::Wake, i);
            }
        }
        if (placed.empty()) {
            overhead_ += pass_cost;
            return;
        }

        const auto schedule = scheduling::plan(cluster_, hg_, placed);
        std::unordered_map<TaskId, std::size_t> index_of;
        for (std::size_t k = 0; k < specs_.size(); ++k)
            index_of.emplace(specs_[k].id, k);

        double longest_transfer = 0.0;
        for (auto& node : nodes_)
            node.queue.clear();
        for (const auto& p : schedule.placements) {
            if (pinned.count(p.task))
                continue;
            const std::size_t k = index_of.at(p.task);
            auto& t = tasks_[k];
            if (p.to != p.from) {
                const double bw = bandwidth_[p.from][p.to];
                const double transfer = static_cast<double>(specs_[k].mu) *
                                        static_cast<double>(cluster_.packet_bits()) / bw;
                t.eligible = std::max(t.eligible, now + pass_cost) + transfer;
                t.node = p.to;
                longest_transfer = std::max(longest_transfer, transfer);
                migrated_units_ += specs_[k].beta;
                migrated_packets_ += specs_[k].mu;
            }
            nodes_[t.node].queue.push_back(k);
        }
        overhead_ += pass_cost + longest_transfer;
    }

    const ClusterGraph& cluster_;
    const HyperGrid& hg_;
    std::span<const TaskSpec> specs_;
    Policy policy_;
    cost::StepCosts costs_;
    std::vector<std::vector<double>> bandwidth_;
    std::vector<TaskState> tasks_;
    std::vector<NodeState> nodes_;
    std::priority_queue<Event, std::vector<Event>, Later> events_;
    std::uint64_t seq_ = 0;
    double frozen_until_ = 0.0;
    double overhead_ = 0.0;
    Units migrated_units_ = 0;
    std::int64_t migrated_packets_ = 0;
    std::size_t passes_ = 0;
    Units executed_ = 0;
};

} // namespace

SimulationReport simulate(const ClusterGraph& cluster, const HyperGrid& hg, std::span<const TaskSpec> tasks,
                          const Policy& policy, const cost::StepCosts& costs, std::uint64_t seed)
{
    Engine engine(cluster, hg, tasks, policy, costs);
    auto report = engine.run();
    report.seed = seed;
    return report;
}

double speedup(const SimulationReport& none, const SimulationReport& psts)
{
    if (none.n_nodes != psts.n_nodes || none.m_tasks != psts.m_tasks || none.seed != psts.seed)
        throw ValidationError("speedup needs two runs of the same cluster, workload and seed");
    if (psts.makespan == 0.0)
        return none.makespan == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return none.makespan / psts.makespan;
}

std::string to_string(ShapeFamily family)
{
    return family == ShapeFamily::Hypercube ? "hypercube" : "line";
}

std::vector<SweepRow> sweep(const SweepConfig& config)
{
    std::vector<SweepRow> rows;
    for (auto n : config.node_counts) {
        const std::uint64_t seed = derive_seed(config.seed, n);
        const ClusterGraph cluster = make_cluster(n, seed);
        WorkloadSpec workload = config.workload;
        workload.seed = derive_seed(seed, 1);
        std::vector<std::string> ids;
        for (const auto& node : cluster.nodes())
            ids.push_back(node.id);
        const auto tasks = generate_workload(workload, ids);
        const auto costs = config.costs ? *config.costs : cost::calibrate_costs(cluster);
        for (auto family : config.shapes) {
            GridShape shape = family == ShapeFamily::Line || n < 2 ? GridShape{{n}} : hypercube_shape(n);
            const HyperGrid hg = embed(cluster, shape);
            SweepRow row;
            row.n_nodes = n;
            row.family = family;
            row.none = simulate(cluster, hg, tasks, Policy::none(), costs, config.seed);
            row.psts = simulate(cluster, hg, tasks, config.policy, costs, config.seed);
            row.speedup = speedup(row.none, row.psts);
            if (config.crossover && n >= 2) {
                cost::CrossoverQuery q;
                q.cluster = &cluster;
                q.shape = shape;
                q.workload = workload;
                q.seed = seed;
                q.costs = costs;
                auto result = cost::estimate_crossover(q);
                if (result.status == cost::CrossoverStatus::Found)
                    row.crossover = result.phi;
                else if (result.status == cost::CrossoverStatus::AlwaysBeneficial)
                    row.crossover = 0.0;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace psts::sim
