#include <popcent/graph.hpp>

#include <popcent/error.hpp>

#include <algorithm>
#include <charconv>
#include <numeric>

namespace popcent {

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges) {
    if (node_count >= kNoNode)
        throw ArgumentError("graph too large for 32-bit node ids");

    std::vector<Edge> norm;
    norm.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u >= node_count || v >= node_count)
            throw ArgumentError("edge endpoint out of range");
        if (u == v)
            continue;
        norm.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(norm.begin(), norm.end());
    norm.erase(std::unique(norm.begin(), norm.end()), norm.end());

    Graph g;
    g.offsets_.assign(node_count + 1, 0);
    for (auto [u, v] : norm) {
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.neighbors_.resize(2 * norm.size());
    std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    // Pairs are sorted by smaller endpoint, so every list fills in ascending order.
    for (auto [u, v] : norm) {
        g.neighbors_[cursor[u]++] = v;
        g.neighbors_[cursor[v]++] = u;
    }
    return g;
}

std::size_t Graph::max_degree() const noexcept {
    std::size_t best = 0;
    for (std::size_t v = 0; v < node_count(); ++v)
        best = std::max(best, degree(static_cast<NodeId>(v)));
    return best;
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
        for (NodeId v : neighbors(u))
            if (u < v)
                out.emplace_back(u, v);
    return out;
}

IndexMap IndexMap::identity(std::size_t n) {
    IndexMap m;
    m.new_to_old.resize(n);
    std::iota(m.new_to_old.begin(), m.new_to_old.end(), NodeId{0});
    m.old_to_new = m.new_to_old;
    return m;
}

IndexMap IndexMap::then(const IndexMap &inner) const {
    IndexMap out;
    out.new_to_old.resize(inner.new_to_old.size());
    for (std::size_t i = 0; i < inner.new_to_old.size(); ++i)
        out.new_to_old[i] = new_to_old[inner.new_to_old[i]];
    out.old_to_new.assign(old_to_new.size(), kNoNode);
    for (std::size_t i = 0; i < out.new_to_old.size(); ++i)
        out.old_to_new[out.new_to_old[i]] = static_cast<NodeId>(i);
    return out;
}

Subgraph induce(const Graph &g, const std::vector<bool> &keep) {
    const std::size_t n = g.node_count();
    if (keep.size() != n)
        throw ArgumentError("keep mask size does not match node count");

    Subgraph sub;
    sub.map.old_to_new.assign(n, kNoNode);
    for (NodeId v = 0; v < n; ++v) {
        if (keep[v]) {
            sub.map.old_to_new[v] = static_cast<NodeId>(sub.map.new_to_old.size());
            sub.map.new_to_old.push_back(v);
        }
    }

    std::vector<Edge> edges;
    for (NodeId nu = 0; nu < sub.map.new_to_old.size(); ++nu) {
        for (NodeId w : g.neighbors(sub.map.new_to_old[nu])) {
            NodeId nw = sub.map.old_to_new[w];
            if (nw != kNoNode && nu < nw)
                edges.emplace_back(nu, nw);
        }
    }
    sub.graph = Graph::from_edges(sub.map.new_to_old.size(), edges);
    return sub;
}

NodeMetaTable::NodeMetaTable(std::vector<NodeMeta> rows) : rows_(std::move(rows)) {
    index_.reserve(rows_.size());
    for (NodeId v = 0; v < rows_.size(); ++v) {
        const auto &r = rows_[v];
        if (!(r.popularity >= 0.0 && r.popularity <= 100.0))
            throw ValidationError("popularity of '" + r.external_id + "' outside [0, 100]");
        if (!index_.emplace(r.external_id, v).second)
            throw ValidationError("duplicate node id '" + r.external_id + "'");
    }
}

std::optional<NodeId> NodeMetaTable::find(const std::string &external_id) const {
    auto it = index_.find(external_id);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::vector<double> NodeMetaTable::popularity() const {
    std::vector<double> p(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
        p[i] = rows_[i].popularity;
    return p;
}

std::vector<std::string> NodeMetaTable::group_labels() const {
    std::vector<std::string> out;
    for (const auto &r : rows_)
        if (!r.group.empty() && std::find(out.begin(), out.end(), r.group) == out.end())
            out.push_back(r.group);
    return out;
}

NodeMetaTable NodeMetaTable::subset(const IndexMap &map) const {
    std::vector<NodeMeta> rows;
    rows.reserve(map.new_to_old.size());
    for (NodeId old : map.new_to_old)
        rows.push_back(rows_.at(old));
    return NodeMetaTable(std::move(rows));
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

// RFC 4180-style splitting: double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv(const std::string &line, std::size_t lineno) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    if (quoted)
        throw ParseError("unterminated quoted field", lineno);
    return fields;
}

} // namespace

LoadedGraph load_edge_list(std::istream &in) {
    LoadedGraph out;
    std::unordered_map<std::string, NodeId> index;
    std::vector<Edge> raw;
    auto intern = [&](std::string_view id) {
        auto [it, fresh] = index.emplace(std::string(id), static_cast<NodeId>(out.ids.size()));
        if (fresh)
            out.ids.emplace_back(id);
        return it->second;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = trim(line);
        if (s.empty() || s.front() == '#')
            continue;
        auto tab = s.find('\t');
        if (tab == std::string_view::npos)
            throw ParseError("expected two tab-separated ids", lineno);
        auto a = trim(s.substr(0, tab));
        auto b = trim(s.substr(tab + 1));
        if (a.empty() || b.empty() || b.find('\t') != std::string_view::npos)
            throw ParseError("expected two tab-separated ids", lineno);
        NodeId u = intern(a);
        NodeId v = intern(b);
        if (u == v)
            ++out.summary.self_loops;
        else
            raw.emplace_back(u, v);
    }
    out.summary.lines = lineno;
    if (out.ids.empty())
        throw ParseError("edge list is empty");

    out.graph = Graph::from_edges(out.ids.size(), raw);
    out.summary.duplicates = raw.size() - out.graph.edge_count();
    return out;
}

std::vector<NodeMeta> load_node_meta(std::istream &in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line))
        throw ParseError("metadata file is empty");
    ++lineno;
    auto header = split_csv(line, lineno);
    for (auto &h : header)
        h = std::string(trim(h));
    const std::vector<std::string> expected{"id", "name", "popularity", "genres", "group"};
    if (header != expected)
        throw ParseError("metadata header must be id,name,popularity,genres,group", lineno);

    std::vector<NodeMeta> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        auto f = split_csv(line, lineno);
        if (f.size() != 5)
            throw ParseError("expected 5 fields, got " + std::to_string(f.size()), lineno);
        NodeMeta m;
        m.external_id = f[0];
        m.name = f[1];
        auto pop = trim(f[2]);
        auto [ptr, ec] = std::from_chars(pop.data(), pop.data() + pop.size(), m.popularity);
        if (ec != std::errc{} || ptr != pop.data() + pop.size())
            throw ParseError("popularity is not numeric: '" + std::string(pop) + "'", lineno);
        if (!(m.popularity >= 0.0 && m.popularity <= 100.0))
            throw ValidationError("popularity " + std::string(pop) + " outside [0, 100] (line " +
                                  std::to_string(lineno) + ")");
        std::string_view genres = f[3];
        while (!genres.empty()) {
            auto bar = genres.find('|');
            auto tok = trim(genres.substr(0, bar));
            if (!tok.empty())
                m.genres.emplace_back(tok);
            if (bar == std::string_view::npos)
                break;
            genres.remove_prefix(bar + 1);
        }
        std::sort(m.genres.begin(), m.genres.end());
        m.genres.erase(std::unique(m.genres.begin(), m.genres.end()), m.genres.end());
        m.group = std::string(trim(f[4]));
        rows.push_back(std::move(m));
    }
    // Constructing the table validates duplicate ids.
    NodeMetaTable check(rows);
    return rows;
}

AnnotatedGraph attach_meta(const LoadedGraph &loaded, std::span<const NodeMeta> rows) {
    NodeMetaTable table(std::vector<NodeMeta>(rows.begin(), rows.end()));
    std::vector<NodeId> to_row(loaded.ids.size());
    for (std::size_t i = 0; i < loaded.ids.size(); ++i) {
        auto row = table.find(loaded.ids[i]);
        if (!row)
            throw ValidationError("node '" + loaded.ids[i] + "' has no metadata row");
        to_row[i] = *row;
    }
    auto edges = loaded.graph.edges();
    for (auto &[u, v] : edges) {
        u = to_row[u];
        v = to_row[v];
    }
    return {Graph::from_edges(table.size(), edges), std::move(table)};
}

Subgraph induce_by_popularity(const Graph &g, std::span<const double> popularity,
                              double threshold) {
    if (popularity.size() != g.node_count())
        throw ArgumentError("popularity vector does not cover every node");
    std::vector<bool> keep(g.node_count());
    for (std::size_t v = 0; v < keep.size(); ++v)
        keep[v] = popularity[v] >= threshold;
    return induce(g, keep);
}

Subgraph induce_by_popularity(const Graph &g, const NodeMetaTable &meta, double threshold) {
    return induce_by_popularity(g, meta.popularity(), threshold);
}

Subgraph remove_popularity_band(const Graph &g, std::span<const double> popularity, double lo,
                                double hi) {
    if (lo > hi)
        throw ArgumentError("band lower bound exceeds upper bound");
    if (popularity.size() != g.node_count())
        throw ArgumentError("popularity vector does not cover every node");
    std::vector<bool> keep(g.node_count());
    for (std::size_t v = 0; v < keep.size(); ++v)
        keep[v] = popularity[v] < lo || popularity[v] > hi;
    return induce(g, keep);
}

Subgraph remove_popularity_band(const Graph &g, const NodeMetaTable &meta, double lo, double hi) {
    return remove_popularity_band(g, meta.popularity(), lo, hi);
}

std::vector<NodeId> connected_components(const Graph &g, std::size_t *count) {
    const std::size_t n = g.node_count();
    std::vector<NodeId> label(n, kNoNode);
    std::vector<NodeId> stack;
    NodeId next = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (label[s] != kNoNode)
            continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId w : g.neighbors(u)) {
                if (label[w] == kNoNode) {
                    label[w] = next;
                    stack.push_back(w);
                }
            }
        }
        ++next;
    }
    if (count)
        *count = next;
    return label;
}

bool is_connected(const Graph &g) {
    std::size_t count = 0;
    connected_components(g, &count);
    return count <= 1;
}

Subgraph largest_connected_component(const Graph &g) {
    if (g.empty())
        return {Graph{}, IndexMap{}};
    std::size_t count = 0;
    auto label = connected_components(g, &count);
    std::vector<std::size_t> size(count, 0);
    for (NodeId l : label)
        ++size[l];
    // Labels are assigned in order of smallest member, so the first maximum wins ties.
    auto best = static_cast<NodeId>(std::max_element(size.begin(), size.end()) - size.begin());
    std::vector<bool> keep(label.size());
    for (std::size_t v = 0; v < label.size(); ++v)
        keep[v] = label[v] == best;
    return induce(g, keep);
}

Subgraph snowball_sample(const Graph &g, NodeId seed, std::optional<std::size_t> max_rounds) {
    if (seed >= g.node_count())
        throw ArgumentError("snowball seed " + std::to_string(seed) + " is not a node");
    std::vector<bool> visited(g.node_count(), false);
    std::vector<NodeId> frontier{seed};
    visited[seed] = true;
    for (std::size_t round = 0; !frontier.empty() && (!max_rounds || round < *max_rounds);
         ++round) {
        std::vector<NodeId> next;
        for (NodeId u : frontier)
            for (NodeId w : g.neighbors(u))
                if (!visited[w]) {
                    visited[w] = true;
                    next.push_back(w);
                }
        frontier = std::move(next);
    }
    return induce(g, visited);
}

} // namespace popcent
