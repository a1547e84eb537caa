// Independent reference implementations used only by the tests.
#pragma once

#include <popcent/graph.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using popcent::Edge;
using popcent::Graph;
using popcent::NodeId;

inline Graph gnp(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (coin(rng))
                e.emplace_back(i, j);
    return Graph::from_edges(n, e);
}

inline Graph path(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i + 1 < n; ++i)
        e.emplace_back(i, i + 1);
    return Graph::from_edges(n, e);
}

inline Graph cycle(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i)
        e.emplace_back(i, static_cast<NodeId>((i + 1) % n));
    return Graph::from_edges(n, e);
}

inline Graph complete(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            e.emplace_back(i, j);
    return Graph::from_edges(n, e);
}

inline Graph star(std::size_t leaves) {
    std::vector<Edge> e;
    for (NodeId i = 1; i <= leaves; ++i)
        e.emplace_back(0, i);
    return Graph::from_edges(leaves + 1, e);
}

inline Eigen::MatrixXd dense(const Graph &g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (auto [u, v] : g.edges())
        a(u, v) = a(v, u) = 1.0;
    return a;
}

struct DenseSpectrum {
    std::vector<double> values;               // descending
    std::vector<std::vector<double>> vectors; // matching order
};

inline DenseSpectrum eigen_decomposition(const Graph &g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(g));
    DenseSpectrum s;
    const auto n = es.eigenvalues().size();
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        s.values.push_back(es.eigenvalues()(i));
        std::vector<double> v(static_cast<std::size_t>(n));
        for (Eigen::Index r = 0; r < n; ++r)
            v[static_cast<std::size_t>(r)] = es.eigenvectors()(r, i);
        s.vectors.push_back(std::move(v));
    }
    return s;
}

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

inline std::vector<std::vector<int>> floyd_warshall(const Graph &g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
    for (std::size_t i = 0; i < n; ++i)
        d[i][i] = 0;
    for (auto [u, v] : g.edges())
        d[u][v] = d[v][u] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

inline std::vector<double> closeness(const Graph &g) {
    auto d = floyd_warshall(g);
    const std::size_t n = g.node_count();
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) {
        long sum = 0;
        for (std::size_t j = 0; j < n; ++j)
            sum += d[i][j];
        c[i] = static_cast<double>(n) / static_cast<double>(sum);
    }
    return c;
}

// Enumerates every simple path between each unordered pair and keeps the shortest ones.
inline std::vector<double> betweenness(const Graph &g) {
    const std::size_t n = g.node_count();
    std::vector<double> b(n, 0.0);
    std::vector<bool> on(n, false);
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < n; ++s) {
        for (NodeId t = s + 1; t < n; ++t) {
            std::vector<std::vector<NodeId>> best;
            std::size_t best_len = std::numeric_limits<std::size_t>::max();
            std::function<void(NodeId)> walk = [&](NodeId v) {
                if (stack.size() > best_len)
                    return;
                if (v == t) {
                    if (stack.size() < best_len) {
                        best_len = stack.size();
                        best.clear();
                    }
                    best.push_back(stack);
                    return;
                }
                for (NodeId w : g.neighbors(v)) {
                    if (on[w])
                        continue;
                    on[w] = true;
                    stack.push_back(w);
                    walk(w);
                    stack.pop_back();
                    on[w] = false;
                }
            };
            on[s] = true;
            stack = {s};
            walk(s);
            on[s] = false;
            if (best.empty())
                continue;
            for (const auto &p : best)
                for (std::size_t i = 1; i + 1 < p.size(); ++i)
                    b[p[i]] += 1.0 / static_cast<double>(best.size());
        }
    }
    return b;
}

// Solves c = (1-d)/N + d * sum_{j ~ i} c_j / deg(j), with degree-0 mass spread uniformly.
inline std::vector<double> pagerank(const Graph &g, double d) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        auto deg = g.degree(static_cast<NodeId>(j));
        if (deg == 0) {
            p.col(j).setConstant(1.0 / static_cast<double>(n));
            continue;
        }
        for (NodeId i : g.neighbors(static_cast<NodeId>(j)))
            p(i, j) = 1.0 / static_cast<double>(deg);
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - d * p;
    Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n, (1.0 - d) / static_cast<double>(n));
    Eigen::VectorXd c = m.fullPivLu().solve(rhs);
    return {c.data(), c.data() + n};
}

inline bool connected(const Graph &g) {
    auto d = floyd_warshall(g);
    for (const auto &row : d)
        for (int x : row)
            if (x >= kInf)
                return false;
    return true;
}

inline double cosine(const std::vector<double> &a, const std::vector<double> &b) {
    double ab = 0, aa = 0, bb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    return std::abs(ab) / std::sqrt(aa * bb);
}

} // namespace oracle
