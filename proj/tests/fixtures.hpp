#pragma once

#include <popcent/graph.hpp>

#include <string>
#include <vector>

namespace fixture {

inline popcent::NodeMetaTable
meta(const std::vector<double> &pops, const std::vector<std::string> &groups = {},
     const std::vector<std::vector<std::string>> &genres = {}) {
    std::vector<popcent::NodeMeta> rows;
    for (std::size_t i = 0; i < pops.size(); ++i) {
        popcent::NodeMeta m;
        m.external_id = "n" + std::to_string(i);
        m.name = m.external_id;
        m.popularity = pops[i];
        if (i < groups.size())
            m.group = groups[i];
        if (i < genres.size())
            m.genres = genres[i];
        rows.push_back(std::move(m));
    }
    return popcent::NodeMetaTable(std::move(rows));
}

inline popcent::Graph graph(std::size_t n, std::vector<popcent::Edge> e) {
    return popcent::Graph::from_edges(n, e);
}

} // namespace fixture
