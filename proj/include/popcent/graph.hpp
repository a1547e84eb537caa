#pragma once

#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace popcent {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/**
 * Immutable simple undirected graph in compressed adjacency (CSR) form.
 *
 * Neighbor lists are sorted ascending, symmetric, free of self-loops and
 * duplicates. Node indices are dense in [0, node_count).
 */
class Graph {
public:
    Graph() : offsets_(1, 0) {}

    /// Builds from an arbitrary edge list; self-loops and duplicate edges
    /// (in either orientation) are dropped.
    static Graph from_edges(std::size_t node_count, std::span<const Edge> edges);

    std::size_t node_count() const noexcept { return offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }
    bool empty() const noexcept { return node_count() == 0; }

    std::span<const NodeId> neighbors(NodeId v) const noexcept {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }

    std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    std::size_t max_degree() const noexcept;
    bool has_edge(NodeId u, NodeId v) const noexcept;

    /// Every undirected edge once, as (u, v) with u < v, in row order.
    std::vector<Edge> edges() const;

    std::span<const std::uint64_t> offsets() const noexcept { return offsets_; }
    std::span<const NodeId> adjacency() const noexcept { return neighbors_; }

    friend bool operator==(const Graph &, const Graph &) = default;

private:
    std::vector<std::uint64_t> offsets_;
    std::vector<NodeId> neighbors_;
};

/// Node index correspondence between a graph and a subgraph induced from it.
struct IndexMap {
    std::vector<NodeId> old_to_new; ///< size = parent node count; kNoNode when dropped
    std::vector<NodeId> new_to_old; ///< size = subgraph node count

    static IndexMap identity(std::size_t n);

    /// Maps through `this` first, then `inner` (inner was induced from our subgraph).
    IndexMap then(const IndexMap &inner) const;
};

struct Subgraph {
    Graph graph;
    IndexMap map;
};

/// Induced subgraph on nodes with keep[v] true; relative order of nodes is preserved.
Subgraph induce(const Graph &g, const std::vector<bool> &keep);

struct NodeMeta {
    std::string external_id;
    std::string name;
    double popularity = 0.0;
    std::vector<std::string> genres; ///< sorted, unique
    std::string group;               ///< empty when unlabeled
};

/// Per-node metadata aligned to graph node indices.
class NodeMetaTable {
public:
    NodeMetaTable() = default;
    explicit NodeMetaTable(std::vector<NodeMeta> rows);

    std::size_t size() const noexcept { return rows_.size(); }
    const NodeMeta &operator[](NodeId v) const { return rows_[v]; }
    std::span<const NodeMeta> rows() const noexcept { return rows_; }

    std::optional<NodeId> find(const std::string &external_id) const;
    std::vector<double> popularity() const;
    std::vector<std::string> group_labels() const; ///< distinct, in first-appearance order

    /// Rows restricted to a subgraph, in subgraph order.
    NodeMetaTable subset(const IndexMap &map) const;

private:
    std::vector<NodeMeta> rows_;
    std::unordered_map<std::string, NodeId> index_;
};

struct LoadSummary {
    std::size_t lines = 0;
    std::size_t self_loops = 0;
    std::size_t duplicates = 0;
};

struct LoadedGraph {
    Graph graph;
    std::vector<std::string> ids; ///< external id of each node, by first appearance
    LoadSummary summary;
};

/// Parses "u<TAB>v" lines ('#' comments and blank lines ignored).
LoadedGraph load_edge_list(std::istream &in);

/// Parses a CSV with header id,name,popularity,genres,group; genres are '|'-delimited.
/// Rows keep file order.
std::vector<NodeMeta> load_node_meta(std::istream &in);

/**
 * Re-indexes the graph so node i is metadata row i. Rows whose id never
 * appears in the edge list become isolated nodes, so exported graphs reload
 * unchanged. A graph node without a row is a ValidationError.
 */
struct AnnotatedGraph {
    Graph graph;
    NodeMetaTable meta;
};
AnnotatedGraph attach_meta(const LoadedGraph &loaded, std::span<const NodeMeta> rows);

/// Subgraph on {v : pop(v) >= t}.
Subgraph induce_by_popularity(const Graph &g, const NodeMetaTable &meta, double threshold);
Subgraph induce_by_popularity(const Graph &g, std::span<const double> popularity,
                              double threshold);

/// Subgraph on {v : pop(v) < lo or pop(v) > hi}.
Subgraph remove_popularity_band(const Graph &g, const NodeMetaTable &meta, double lo, double hi);
Subgraph remove_popularity_band(const Graph &g, std::span<const double> popularity, double lo,
                                double hi);

/// Component label per node; labels are numbered by smallest contained index.
std::vector<NodeId> connected_components(const Graph &g, std::size_t *count = nullptr);
bool is_connected(const Graph &g);

/// Largest component; ties go to the component holding the smallest node index.
Subgraph largest_connected_component(const Graph &g);

/// Breadth-first expansion for up to max_rounds rounds (nullopt = until exhausted).
Subgraph snowball_sample(const Graph &g, NodeId seed, std::optional<std::size_t> max_rounds);

} // namespace popcent
