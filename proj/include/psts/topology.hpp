#ifndef PSTS_TOPOLOGY_HPP
#define PSTS_TOPOLOGY_HPP

#include "psts/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace psts {

using NodeIndex = std::size_t;

struct NodeSpec {
    std::string id;
    Rational tau; // work units per second; zero marks a virtual node

    bool is_virtual() const { return tau.numerator() == 0; }
};

struct LinkSpec {
    std::string a;
    std::string b;
    double bandwidth = 0.0; // bits per second; zero marks a virtual link

    bool is_virtual() const { return bandwidth == 0.0; }
};

// Irregular cluster network. Construction validates every invariant and
// throws ValidationError on the first violation.
class ClusterGraph {
public:
    ClusterGraph(std::vector<NodeSpec> nodes, std::vector<LinkSpec> links, std::uint64_t packet_bits);

    const std::vector<NodeSpec>& nodes() const { return nodes_; }
    const std::vector<LinkSpec>& links() const { return links_; }
    std::uint64_t packet_bits() const { return packet_bits_; }

    std::optional<NodeIndex> find(const std::string& id) const;
    NodeIndex index_of(const std::string& id) const; // throws on unknown id
    const NodeSpec& node(NodeIndex i) const { return nodes_.at(i); }

    std::size_t real_count() const { return real_count_; }
    Rational total_power() const;

    struct Edge {
        NodeIndex to;
        double bandwidth;
    };
    // Real links only, neighbours sorted by id.
    const std::vector<Edge>& neighbours(NodeIndex i) const { return adjacency_.at(i); }

    friend bool operator==(const ClusterGraph& a, const ClusterGraph& b);

private:
    std::vector<NodeSpec> nodes_;
    std::vector<LinkSpec> links_;
    std::uint64_t packet_bits_;
    std::size_t real_count_ = 0;
    std::unordered_map<std::string, NodeIndex> index_;
    std::vector<std::vector<Edge>> adjacency_;
};

struct GridShape {
    std::vector<std::size_t> dims;

    std::size_t dimension() const { return dims.size(); }
    std::size_t capacity() const;
    // Number of cells in one slice obtained by fixing the first `depth` axes.
    std::size_t block_size(std::size_t depth) const;
    std::string to_string() const; // "3x6"

    friend bool operator==(const GridShape&, const GridShape&) = default;
};

// Throws ValidationError unless the shape is usable.
void validate(const GridShape& shape);
GridShape parse_shape(const std::string& text);

struct CoordIndex {
    std::vector<std::size_t> coords; // 0-based, first axis most significant

    friend bool operator==(const CoordIndex&, const CoordIndex&) = default;
};

std::size_t linearize(const CoordIndex& c, const GridShape& shape);
CoordIndex delinearize(std::size_t rank, const GridShape& shape);

class HyperGrid {
public:
    HyperGrid(GridShape shape, std::vector<std::optional<NodeIndex>> cells);

    const GridShape& shape() const { return shape_; }
    std::size_t capacity() const { return cells_.size(); }
    const std::vector<std::optional<NodeIndex>>& cells() const { return cells_; }
    std::optional<NodeIndex> node_at(std::size_t rank) const { return cells_.at(rank); }
    std::size_t rank_of(NodeIndex node) const; // throws if not placed
    std::size_t real_count() const { return rank_of_.size(); }
    std::size_t virtual_count() const { return capacity() - real_count(); }

private:
    GridShape shape_;
    std::vector<std::optional<NodeIndex>> cells_;
    std::unordered_map<NodeIndex, std::size_t> rank_of_;
};

// Contiguous run of ranks forming one sub-hyper-grid.
struct SliceView {
    std::size_t begin;
    std::size_t end;
    GridShape shape;

    std::size_t size() const { return end - begin; }
};

std::size_t optimal_dimension(std::size_t n_real);
GridShape hypercube_shape(std::size_t n_real);

HyperGrid embed(const ClusterGraph& graph, const std::optional<GridShape>& shape = std::nullopt);

// The parallel sub-grids of dimension max(level - 1, 1), in rank order.
std::vector<SliceView> slices(const HyperGrid& hg, std::size_t level);

// Children of `parent` along its first axis.
std::vector<SliceView> children(const SliceView& parent);

inline constexpr double kUnboundedBandwidth = std::numeric_limits<double>::infinity();

// Widest-path bottleneck between two real nodes.
double bottleneck_bandwidth(const ClusterGraph& graph, NodeIndex src, NodeIndex dst);

// bottleneck_bandwidth for every ordered pair; virtual nodes get 0 rows.
std::vector<std::vector<double>> bottleneck_table(const ClusterGraph& graph);

} // namespace psts

#endif
