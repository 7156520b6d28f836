#include "psts/topology.hpp"

#include "psts/error.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <queue>
#include <set>
#include <sstream>

namespace psts {

ClusterGraph::ClusterGraph(std::vector<NodeSpec> nodes, std::vector<LinkSpec> links, std::uint64_t packet_bits)
    : nodes_(std::move(nodes)), links_(std::move(links)), packet_bits_(packet_bits)
{
    if (packet_bits_ == 0)
        throw ValidationError("packet size must be positive");

    for (NodeIndex i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (n.id.empty())
            throw ValidationError("empty node id");
        if (n.tau.numerator() < 0)
            throw ValidationError("node '" + n.id + "' has negative processing power");
        if (!index_.emplace(n.id, i).second)
            throw ValidationError("duplicate node id '" + n.id + "'");
        if (!n.is_virtual())
            ++real_count_;
    }
    if (real_count_ == 0)
        throw ValidationError("cluster has no node with positive processing power");

    adjacency_.resize(nodes_.size());
    std::set<std::pair<NodeIndex, NodeIndex>> seen;
    for (const auto& l : links_) {
        auto a = find(l.a);
        auto b = find(l.b);
        if (!a)
            throw ValidationError("link references unknown node '" + l.a + "'");
        if (!b)
            throw ValidationError("link references unknown node '" + l.b + "'");
        if (*a == *b)
            throw ValidationError("self link on node '" + l.a + "'");
        if (!(l.bandwidth >= 0.0))
            throw ValidationError("link " + l.a + "-" + l.b + " has negative bandwidth");
        if (!seen.emplace(std::min(*a, *b), std::max(*a, *b)).second)
            throw ValidationError("duplicate link " + l.a + "-" + l.b);
        if (l.is_virtual() || nodes_[*a].is_virtual() || nodes_[*b].is_virtual())
            continue;
        adjacency_[*a].push_back({*b, l.bandwidth});
        adjacency_[*b].push_back({*a, l.bandwidth});
    }
    for (auto& adj : adjacency_)
        std::sort(adj.begin(), adj.end(),
                  [this](const Edge& x, const Edge& y) { return nodes_[x.to].id < nodes_[y.to].id; });

    // real nodes must form one component
    NodeIndex start = nodes_.size();
    for (NodeIndex i = 0; i < nodes_.size(); ++i)
        if (!nodes_[i].is_virtual()) {
            start = i;
            break;
        }
    std::vector<bool> reached(nodes_.size(), false);
    std::deque<NodeIndex> frontier{start};
    reached[start] = true;
    std::size_t count = 1;
    while (!frontier.empty()) {
        NodeIndex v = frontier.front();
        frontier.pop_front();
        for (const auto& e : adjacency_[v])
            if (!reached[e.to]) {
                reached[e.to] = true;
                ++count;
                frontier.push_back(e.to);
            }
    }
    if (count != real_count_) {
        for (NodeIndex i = 0; i < nodes_.size(); ++i)
            if (!nodes_[i].is_virtual() && !reached[i])
                throw ValidationError("real nodes are not connected: '" + nodes_[i].id +
                                      "' is unreachable from '" + nodes_[start].id + "'");
    }
}

std::optional<NodeIndex> ClusterGraph::find(const std::string& id) const
{
    auto it = index_.find(id);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

NodeIndex ClusterGraph::index_of(const std::string& id) const
{
    auto i = find(id);
    if (!i)
        throw ValidationError("unknown node id '" + id + "'");
    return *i;
}

Rational ClusterGraph::total_power() const
{
    Rational sum = 0;
    for (const auto& n : nodes_)
        sum += n.tau;
    return sum;
}

bool operator==(const ClusterGraph& a, const ClusterGraph& b)
{
    if (a.packet_bits_ != b.packet_bits_ || a.nodes_.size() != b.nodes_.size() ||
        a.links_.size() != b.links_.size())
        return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i)
        if (a.nodes_[i].id != b.nodes_[i].id || a.nodes_[i].tau != b.nodes_[i].tau)
            return false;
    for (std::size_t i = 0; i < a.links_.size(); ++i)
        if (a.links_[i].a != b.links_[i].a || a.links_[i].b != b.links_[i].b ||
            a.links_[i].bandwidth != b.links_[i].bandwidth)
            return false;
    return true;
}

std::size_t GridShape::capacity() const
{
    std::size_t c = 1;
    for (auto p : dims)
        c *= p;
    return c;
}

std::size_t GridShape::block_size(std::size_t depth) const
{
    std::size_t c = 1;
    for (std::size_t k = depth; k < dims.size(); ++k)
        c *= dims[k];
    return c;
}

std::string GridShape::to_string() const
{
    std::string out;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (k)
            out += 'x';
        out += std::to_string(dims[k]);
    }
    return out;
}

void validate(const GridShape& shape)
{
    if (shape.dims.empty())
        throw ValidationError("grid shape has no axes");
    if (shape.dims.size() == 1) {
        if (shape.dims[0] < 1)
            throw ValidationError("1-D grid needs at least one cell");
        return;
    }
    for (auto p : shape.dims)
        if (p < 2)
            throw ValidationError("grid shape " + shape.to_string() + ": every axis needs length >= 2");
}

GridShape parse_shape(const std::string& text)
{
    GridShape shape;
    if (text.empty() || text.back() == 'x')
        throw ValidationError("malformed shape '" + text + "' (expected e.g. 3x6)");
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, 'x')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw ValidationError("malformed shape '" + text + "' (expected e.g. 3x6)");
        shape.dims.push_back(std::stoul(part));
    }
    validate(shape);
    return shape;
}

std::size_t linearize(const CoordIndex& c, const GridShape& shape)
{
    if (c.coords.size() != shape.dims.size())
        throw ValidationError("coordinate arity does not match grid dimension");
    std::size_t rank = 0;
    for (std::size_t k = 0; k < shape.dims.size(); ++k) {
        if (c.coords[k] >= shape.dims[k])
            throw ValidationError("coordinate " + std::to_string(c.coords[k]) + " out of range on axis " +
                                  std::to_string(k));
        rank = rank * shape.dims[k] + c.coords[k];
    }
    return rank;
}

CoordIndex delinearize(std::size_t rank, const GridShape& shape)
{
    if (rank >= shape.capacity())
        throw ValidationError("rank " + std::to_string(rank) + " out of range");
    CoordIndex c;
    c.coords.resize(shape.dims.size());
    for (std::size_t k = shape.dims.size(); k-- > 0;) {
        c.coords[k] = rank % shape.dims[k];
        rank /= shape.dims[k];
    }
    return c;
}

HyperGrid::HyperGrid(GridShape shape, std::vector<std::optional<NodeIndex>> cells)
    : shape_(std::move(shape)), cells_(std::move(cells))
{
    validate(shape_);
    if (cells_.size() != shape_.capacity())
        throw ValidationError("placement size does not match grid capacity");
    for (std::size_t r = 0; r < cells_.size(); ++r)
        if (cells_[r] && !rank_of_.emplace(*cells_[r], r).second)
            throw ValidationError("node placed twice in grid");
}

std::size_t HyperGrid::rank_of(NodeIndex node) const
{
    auto it = rank_of_.find(node);
    if (it == rank_of_.end())
        throw ValidationError("node is not placed in the grid");
    return it->second;
}

std::size_t optimal_dimension(std::size_t n_real)
{
    if (n_real == 0)
        throw ValidationError("node count must be positive");
    if (n_real == 1)
        return 1;
    return static_cast<std::size_t>(std::bit_width(n_real - 1));
}

GridShape hypercube_shape(std::size_t n_real)
{
    if (n_real < 2)
        throw ValidationError("hypercube shape needs at least two nodes");
    return GridShape{std::vector<std::size_t>(optimal_dimension(n_real), 2)};
}

HyperGrid embed(const ClusterGraph& graph, const std::optional<GridShape>& shape)
{
    const std::size_t n = graph.real_count();
    GridShape s = shape ? *shape : (n >= 2 ? hypercube_shape(n) : GridShape{{1}});
    validate(s);
    if (s.capacity() < n)
        throw ValidationError("grid " + s.to_string() + " holds " + std::to_string(s.capacity()) +
                              " cells but the cluster has " + std::to_string(n) + " real nodes");

    // BFS from the lowest real id, neighbours in id order.
    NodeIndex root = graph.nodes().size();
    for (NodeIndex i = 0; i < graph.nodes().size(); ++i) {
        if (graph.node(i).is_virtual())
            continue;
        if (root == graph.nodes().size() || graph.node(i).id < graph.node(root).id)
            root = i;
    }
    std::vector<std::optional<NodeIndex>> cells(s.capacity());
    std::vector<bool> seen(graph.nodes().size(), false);
    std::deque<NodeIndex> frontier{root};
    seen[root] = true;
    std::size_t next = 0;
    while (!frontier.empty()) {
        NodeIndex v = frontier.front();
        frontier.pop_front();
        cells[next++] = v;
        for (const auto& e : graph.neighbours(v))
            if (!seen[e.to]) {
                seen[e.to] = true;
                frontier.push_back(e.to);
            }
    }
    return HyperGrid(std::move(s), std::move(cells));
}

std::vector<SliceView> children(const SliceView& parent)
{
    const auto& dims = parent.shape.dims;
    if (dims.size() <= 1)
        return {parent};
    GridShape sub{std::vector<std::size_t>(dims.begin() + 1, dims.end())};
    const std::size_t block = sub.capacity();
    std::vector<SliceView> out;
    out.reserve(dims[0]);
    for (std::size_t i = 0; i < dims[0]; ++i)
        out.push_back({parent.begin + i * block, parent.begin + (i + 1) * block, sub});
    return out;
}

std::vector<SliceView> slices(const HyperGrid& hg, std::size_t level)
{
    const auto& shape = hg.shape();
    const std::size_t d = shape.dimension();
    if (level < 1 || level > d)
        throw ValidationError("slice level " + std::to_string(level) + " outside [1, " + std::to_string(d) + "]");
    const std::size_t sub_dim = std::max<std::size_t>(level - 1, 1);
    const std::size_t fixed = d - sub_dim;
    GridShape sub{std::vector<std::size_t>(shape.dims.begin() + static_cast<std::ptrdiff_t>(fixed), shape.dims.end())};
    const std::size_t block = sub.capacity();
    std::vector<SliceView> out;
    for (std::size_t b = 0; b < hg.capacity(); b += block)
        out.push_back({b, b + block, sub});
    return out;
}

namespace {

std::vector<double> widest_from(const ClusterGraph& graph, NodeIndex src)
{
    std::vector<double> best(graph.nodes().size(), 0.0);
    best[src] = kUnboundedBandwidth;
    std::priority_queue<std::pair<double, NodeIndex>> heap;
    heap.emplace(best[src], src);
    while (!heap.empty()) {
        auto [bw, v] = heap.top();
        heap.pop();
        if (bw < best[v])
            continue;
        for (const auto& e : graph.neighbours(v)) {
            double cand = std::min(bw, e.bandwidth);
            if (cand > best[e.to]) {
                best[e.to] = cand;
                heap.emplace(cand, e.to);
            }
        }
    }
    return best;
}

} // namespace

double bottleneck_bandwidth(const ClusterGraph& graph, NodeIndex src, NodeIndex dst)
{
    if (graph.node(src).is_virtual() || graph.node(dst).is_virtual())
        throw ValidationError("bottleneck bandwidth is only defined between real nodes");
    if (src == dst)
        return kUnboundedBandwidth;
    double bw = widest_from(graph, src)[dst];
    if (bw <= 0.0)
        throw ValidationError("nodes '" + graph.node(src).id + "' and '" + graph.node(dst).id +
                              "' are disconnected");
    return bw;
}

std::vector<std::vector<double>> bottleneck_table(const ClusterGraph& graph)
{
    std::vector<std::vector<double>> table(graph.nodes().size());
    for (NodeIndex i = 0; i < graph.nodes().size(); ++i) {
        if (graph.node(i).is_virtual())
            table[i].assign(graph.nodes().size(), 0.0);
        else
            table[i] = widest_from(graph, i);
    }
    return table;
}

} // namespace psts
