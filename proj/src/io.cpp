#include "psts/io.hpp"

#include "psts/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace psts::io {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text)
{
    std::vector<Line> out;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        ++number;
        if (auto hash = raw.find('#'); hash != std::string_view::npos)
            raw = raw.substr(0, hash);
        std::istringstream ss{std::string(raw)};
        Line line{number, {}};
        for (std::string tok; ss >> tok;)
            line.tokens.push_back(tok);
        if (!line.tokens.empty())
            out.push_back(std::move(line));
        if (end == text.size())
            break;
        pos = end + 1;
    }
    return out;
}

void expect_arity(const Line& line, std::size_t n, const char* usage)
{
    if (line.tokens.size() != n)
        throw ParseError(line.number, std::string("expected '") + usage + "', got " +
                                          std::to_string(line.tokens.size()) + " tokens");
}

bool valid_id(const std::string& id)
{
    if (id.empty())
        return false;
    for (char c : id)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
            return false;
    return true;
}

const std::string& id_token(const Line& line, std::size_t i)
{
    if (!valid_id(line.tokens[i]))
        throw ParseError(line.number, "bad id '" + line.tokens[i] + "'");
    return line.tokens[i];
}

Rational rational_token(const Line& line, std::size_t i)
{
    const auto& tok = line.tokens[i];
    try {
        if (auto slash = tok.find('/'); slash != std::string::npos) {
            const auto num = parse_decimal(tok.substr(0, slash));
            const auto den = parse_decimal(tok.substr(slash + 1));
            if (num.denominator() != 1 || den.denominator() != 1 || den.numerator() == 0)
                throw std::invalid_argument(tok);
            return num / den;
        }
        return parse_decimal(tok);
    } catch (const std::exception&) {
        throw ParseError(line.number, "bad number '" + tok + "'");
    }
}

double double_token(const Line& line, std::size_t i, bool allow_inf = false)
{
    const auto& tok = line.tokens[i];
    if (allow_inf && tok == "inf")
        return kUnboundedBandwidth;
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used == tok.size() && std::isfinite(v))
            return v;
    } catch (const std::exception&) {
    }
    throw ParseError(line.number, "bad number '" + tok + "'");
}

std::int64_t integer_token(const Line& line, std::size_t i)
{
    const auto& tok = line.tokens[i];
    try {
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used == tok.size())
            return v;
    } catch (const std::exception&) {
    }
    throw ParseError(line.number, "bad integer '" + tok + "'");
}

TaskId id_number(const Line& line, std::size_t i)
{
    const auto& tok = line.tokens[i];
    TaskId v = 0;
    const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || end != tok.data() + tok.size())
        throw ParseError(line.number, "bad task id '" + tok + "'");
    return v;
}

std::string exact(double v)
{
    if (std::isinf(v))
        return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Terminating decimals print as decimals, anything else as n/d.
std::string decimal(const Rational& r)
{
    std::int64_t den = r.denominator();
    int twos = 0, fives = 0;
    while (den % 2 == 0) {
        den /= 2;
        ++twos;
    }
    while (den % 5 == 0) {
        den /= 5;
        ++fives;
    }
    if (den != 1 || r.denominator() == 1)
        return to_string(r);
    const int digits = std::max(twos, fives);
    std::int64_t scale = 1;
    for (int i = 0; i < digits; ++i)
        scale *= 10;
    const std::int64_t scaled = r.numerator() * (scale / r.denominator());
    const std::int64_t mag = scaled < 0 ? -scaled : scaled;
    std::string frac = std::to_string(mag % scale);
    frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
    return std::string(scaled < 0 ? "-" : "") + std::to_string(mag / scale) + "." + frac;
}

} // namespace

ClusterGraph parse_topology(std::string_view text)
{
    std::optional<std::uint64_t> packet_bits;
    std::vector<NodeSpec> nodes;
    std::vector<LinkSpec> links;
    std::unordered_set<std::string> seen;
    for (const auto& line : tokenize(text)) {
        const auto& kw = line.tokens[0];
        if (kw == "packetbits") {
            expect_arity(line, 2, "packetbits <w>");
            if (packet_bits)
                throw ParseError(line.number, "packetbits given twice");
            const auto w = integer_token(line, 1);
            if (w <= 0)
                throw ParseError(line.number, "packet size must be positive");
            packet_bits = static_cast<std::uint64_t>(w);
        } else if (kw == "node") {
            expect_arity(line, 3, "node <id> <tau>");
            const auto& id = id_token(line, 1);
            const auto tau = rational_token(line, 2);
            if (tau.numerator() <= 0)
                throw ParseError(line.number, "node '" + id + "' needs a positive power, got '" + line.tokens[2] + "'");
            if (!seen.insert(id).second)
                throw ParseError(line.number, "duplicate node id '" + id + "'");
            nodes.push_back({id, tau});
        } else if (kw == "link") {
            expect_arity(line, 4, "link <a> <b> <bandwidth>");
            const auto bw = double_token(line, 3, true);
            if (bw <= 0)
                throw ParseError(line.number, "link bandwidth must be positive, got '" + line.tokens[3] + "'");
            links.push_back({id_token(line, 1), id_token(line, 2), bw});
        } else {
            throw ParseError(line.number, "unknown keyword '" + kw + "'");
        }
    }
    if (!packet_bits)
        throw ValidationError("topology lacks a packetbits line");
    return ClusterGraph(std::move(nodes), std::move(links), *packet_bits);
}

std::string serialize_topology(const ClusterGraph& graph)
{
    std::string out = "packetbits " + std::to_string(graph.packet_bits()) + "\n";
    for (const auto& n : graph.nodes())
        out += "node " + n.id + " " + decimal(n.tau) + "\n";
    for (const auto& l : graph.links())
        out += "link " + l.a + " " + l.b + " " + exact(l.bandwidth) + "\n";
    return out;
}

std::vector<TaskSpec> parse_tasks(std::string_view text)
{
    std::vector<TaskSpec> out;
    std::unordered_set<TaskId> seen;
    for (const auto& line : tokenize(text)) {
        if (line.tokens[0] != "task")
            throw ParseError(line.number, "unknown keyword '" + line.tokens[0] + "'");
        expect_arity(line, 6, "task <id> <origin> <beta> <mu> <arrival>");
        TaskSpec t;
        t.id = id_number(line, 1);
        t.origin = id_token(line, 2);
        t.beta = integer_token(line, 3);
        t.mu = integer_token(line, 4);
        t.arrival = double_token(line, 5);
        if (t.beta < 1)
            throw ParseError(line.number, "task " + line.tokens[1] + " needs beta >= 1");
        if (t.mu < 0)
            throw ParseError(line.number, "task " + line.tokens[1] + " needs mu >= 0");
        if (t.arrival < 0)
            throw ParseError(line.number, "task " + line.tokens[1] + " has a negative arrival time");
        if (!seen.insert(t.id).second)
            throw ParseError(line.number, "duplicate task id " + line.tokens[1]);
        out.push_back(std::move(t));
    }
    return out;
}

std::string serialize_tasks(const std::vector<TaskSpec>& tasks)
{
    std::string out;
    for (const auto& t : tasks)
        out += "task " + std::to_string(t.id) + " " + t.origin + " " + std::to_string(t.beta) + " " +
               std::to_string(t.mu) + " " + exact(t.arrival) + "\n";
    return out;
}

std::vector<PlacedTask> place(const ClusterGraph& graph, const std::vector<TaskSpec>& tasks)
{
    std::vector<PlacedTask> out;
    out.reserve(tasks.size());
    for (const auto& t : tasks) {
        auto v = graph.find(t.origin);
        if (!v)
            throw ValidationError("task " + std::to_string(t.id) + " names unknown node '" + t.origin + "'");
        out.push_back({t.id, *v, t.beta, t.mu});
    }
    return out;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw ValidationError("cannot write '" + path + "'");
}

std::string format_plan(const ClusterGraph& graph, const scheduling::MigrationPlan& plan)
{
    std::string out;
    for (const auto& m : plan.moves)
        out += "move " + std::to_string(m.task) + " " + graph.node(m.from).id + " " + graph.node(m.to).id + "\n";
    out += "summary units=" + std::to_string(plan.migrated_units) + " packets=" +
           std::to_string(plan.migrated_packets) + " moves=" + std::to_string(plan.moves.size()) + "\n";
    return out;
}

std::string format_loads(const ClusterGraph& graph, const std::vector<Units>& loads)
{
    std::string out = "node,tau,load\n";
    for (NodeIndex i = 0; i < graph.nodes().size(); ++i)
        out += graph.node(i).id + "," + decimal(graph.node(i).tau) + "," + std::to_string(loads.at(i)) + "\n";
    return out;
}

std::string format_number(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

const char* const kReportHeader =
    "policy,n_nodes,dims,m_tasks,seed,makespan,mean_response,max_response,overhead,migrated_units,"
    "migrated_packets,imbalance,speedup,crossover";

std::string report_row(const sim::SimulationReport& r, std::optional<double> speedup, std::optional<double> crossover)
{
    // policy labels contain no commas; quote anyway so readers never split them
    std::string out = "\"" + r.policy + "\"," + std::to_string(r.n_nodes) + "," + r.dims + "," +
                      std::to_string(r.m_tasks) + "," + std::to_string(r.seed) + "," + format_number(r.makespan) +
                      "," + format_number(r.mean_response) + "," + format_number(r.max_response) + "," +
                      format_number(r.overhead) + "," + std::to_string(r.migrated_units) + "," +
                      std::to_string(r.migrated_packets) + "," + format_number(r.imbalance) + ",";
    if (speedup)
        out += format_number(*speedup);
    out += ",";
    if (crossover)
        out += format_number(*crossover);
    return out + "\n";
}

std::string format_cost_table(const cost::OptimalityReport& report)
{
    std::string out = "dims,capacity,steps,total_seconds\n";
    for (const auto& s : report.shapes)
        out += s.shape.to_string() + "," + std::to_string(s.shape.capacity()) + "," + std::to_string(s.steps) + "," +
               format_number(s.seconds) + "\n";
    return out;
}

} // namespace psts::io
