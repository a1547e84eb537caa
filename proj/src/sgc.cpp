#include <popcent/sgc.hpp>

#include <popcent/error.hpp>

#include <algorithm>
#include <cmath>

namespace popcent {

void SGCConfig::validate(bool require_rate_order) const {
    if (!(masses_count > ba_m && ba_m >= 1))
        throw ArgumentError("SGC: need masses_count > ba_m >= 1");
    if (!(popularity_mean > 0.0))
        throw ArgumentError("SGC: popularity_mean must be positive");
    if (!(popularity_cap > 0.0 && popularity_cap <= 100.0))
        throw ArgumentError("SGC: popularity_cap must lie in (0, 100]");
    if (!(k > 0.0 && k < 100.0))
        throw ArgumentError("SGC: k must lie in (0, 100)");
    if (n_leaders < 1 || n_celebrities < 1)
        throw ArgumentError("SGC: group sizes must be at least 1");
    if (!(p_leader > 0.0 && p_leader < 1.0) || !(p_celeb > 0.0 && p_celeb < 1.0))
        throw ArgumentError("SGC: attachment probabilities must lie in (0, 1)");
    if (require_rate_order && p_celeb > p_leader)
        throw ArgumentError("SGC: p_celeb must not exceed p_leader");
    if (leader_target == LeaderTarget::beta) {
        if (!(beta_alpha > 0.0 && beta_beta > 0.0))
            throw ArgumentError("SGC: beta parameters must be positive");
        if (beta_expected_degree && *beta_expected_degree < 1)
            throw ArgumentError("SGC: beta_expected_degree must be at least 1");
    }
}

namespace {

double round6(double x) { return std::round(x * 1e6) / 1e6; }

std::size_t add_clique(SGCFragment &f, const std::string &group, std::size_t size) {
    const std::size_t first = f.node_count();
    for (std::size_t i = 0; i < size; ++i) {
        f.popularity.push_back(100.0);
        f.group.push_back(group);
    }
    for (std::size_t i = first; i < first + size; ++i)
        for (std::size_t j = i + 1; j < first + size; ++j)
            f.edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    return first;
}

} // namespace

SGCFragment generate_masses(const SGCConfig &cfg, Rng &rng) {
    const std::size_t n = cfg.masses_count, m = cfg.ba_m;
    if (!(n > m && m >= 1))
        throw ArgumentError("generate_masses: need masses_count > ba_m >= 1");

    SGCFragment f;
    f.masses_count = n;
    f.popularity.resize(n);
    f.group.assign(n, kMassesGroup);
    std::exponential_distribution<double> expo(1.0 / cfg.popularity_mean);
    for (auto &p : f.popularity)
        p = round6(std::min(expo(rng), cfg.popularity_cap));

    // Every edge endpoint appears once here, so a uniform pick is degree-proportional.
    std::vector<NodeId> endpoints;
    endpoints.reserve(2 * (m * (m + 1) / 2 + (n - m - 1) * m));
    f.edges.reserve(m * (m + 1) / 2 + (n - m - 1) * m);
    for (NodeId i = 0; i <= m; ++i)
        for (NodeId j = i + 1; j <= m; ++j) {
            f.edges.emplace_back(i, j);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    std::vector<NodeId> targets;
    for (auto v = static_cast<NodeId>(m + 1); v < n; ++v) {
        targets.clear();
        std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
        while (targets.size() < m) {
            NodeId t = endpoints[pick(rng)];
            if (std::find(targets.begin(), targets.end(), t) == targets.end())
                targets.push_back(t);
        }
        for (NodeId t : targets) {
            f.edges.emplace_back(t, v);
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }
    return f;
}

void attach_group(SGCFragment &f, const std::string &group, std::size_t size,
                  const std::function<bool(double)> &eligible, double p, Rng &rng) {
    if (size < 1)
        throw ArgumentError("attach_group: size must be at least 1");
    if (!(p > 0.0 && p < 1.0))
        throw ArgumentError("attach_group: p must lie in (0, 1)");

    std::vector<NodeId> pool;
    for (NodeId v = 0; v < f.masses_count; ++v)
        if (eligible(f.popularity[v]))
            pool.push_back(v);

    const std::size_t first = add_clique(f, group, size);
    if (pool.empty()) {
        f.warnings.push_back("group '" + group +
                             "': no eligible mass nodes, attachment skipped");
        return;
    }
    std::bernoulli_distribution coin(p);
    for (std::size_t g = first; g < first + size; ++g)
        for (NodeId v : pool)
            if (coin(rng))
                f.edges.emplace_back(static_cast<NodeId>(g), v);
}

void beta_target_attachment(SGCFragment &f, const std::string &group, std::size_t size,
                            double alpha, double beta, std::size_t expected_degree, Rng &rng) {
    if (!(alpha > 0.0 && beta > 0.0))
        throw ArgumentError("beta_target_attachment: alpha and beta must be positive");
    if (expected_degree < 1)
        throw ArgumentError("beta_target_attachment: expected_degree must be at least 1");
    if (f.masses_count == 0)
        throw ArgumentError("beta_target_attachment: no mass nodes to attach to");

    std::vector<std::vector<NodeId>> bucket(101);
    for (NodeId v = 0; v < f.masses_count; ++v) {
        auto b = static_cast<std::size_t>(std::clamp(std::lround(f.popularity[v]), 0L, 100L));
        bucket[b].push_back(v);
    }
    auto nearest_nonempty = [&](long want) {
        for (long d = 0; d <= 100; ++d) {
            if (want - d >= 0 && !bucket[want - d].empty())
                return static_cast<std::size_t>(want - d);
            if (want + d <= 100 && !bucket[want + d].empty())
                return static_cast<std::size_t>(want + d);
        }
        return std::size_t{0};
    };

    const std::size_t first = add_clique(f, group, size);
    std::gamma_distribution<double> ga(alpha, 1.0), gb(beta, 1.0);
    std::vector<NodeId> chosen;
    for (std::size_t g = first; g < first + size; ++g) {
        chosen.clear();
        for (std::size_t i = 0; i < expected_degree; ++i) {
            double x = ga(rng), y = gb(rng);
            double target = x + y > 0.0 ? 100.0 * x / (x + y) : 50.0;
            const auto &b = bucket[nearest_nonempty(std::lround(target))];
            std::uniform_int_distribution<std::size_t> pick(0, b.size() - 1);
            chosen.push_back(b[pick(rng)]);
        }
        std::sort(chosen.begin(), chosen.end());
        chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
        for (NodeId v : chosen)
            f.edges.emplace_back(static_cast<NodeId>(g), v);
    }
}

SGCGraph finalize(SGCFragment f, const SGCConfig &cfg) {
    std::vector<NodeMeta> rows(f.node_count());
    std::size_t counter_m = 0, counter_l = 0, counter_c = 0, counter_x = 0;
    for (std::size_t v = 0; v < rows.size(); ++v) {
        auto &r = rows[v];
        r.group = f.group[v];
        r.popularity = f.popularity[v];
        if (r.group == kMassesGroup)
            r.external_id = "m" + std::to_string(counter_m++);
        else if (r.group == kLeaderGroup)
            r.external_id = "L" + std::to_string(counter_l++);
        else if (r.group == kCelebrityGroup)
            r.external_id = "C" + std::to_string(counter_c++);
        else
            r.external_id = r.group + std::to_string(counter_x++);
        r.name = r.external_id;
    }
    SGCGraph out;
    out.graph = Graph::from_edges(rows.size(), f.edges);
    out.meta = NodeMetaTable(std::move(rows));
    out.config = cfg;
    out.warnings = std::move(f.warnings);
    return out;
}

SGCGraph generate_sgc(const SGCConfig &cfg, const GenerateOptions &options) {
    cfg.validate(options.require_rate_order);
    Rng rng(cfg.seed);
    auto f = generate_masses(cfg, rng);
    const double k = cfg.k;
    if (cfg.leader_target == LeaderTarget::beta) {
        std::size_t degree = 0;
        if (cfg.beta_expected_degree) {
            degree = *cfg.beta_expected_degree;
        } else {
            auto below = std::count_if(f.popularity.begin(), f.popularity.end(),
                                       [k](double p) { return p < k; });
            degree = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::lround(cfg.p_leader * static_cast<double>(below))));
        }
        beta_target_attachment(f, kLeaderGroup, cfg.n_leaders, cfg.beta_alpha, cfg.beta_beta,
                               degree, rng);
    } else {
        attach_group(f, kLeaderGroup, cfg.n_leaders, [k](double p) { return p < k; },
                     cfg.p_leader, rng);
    }
    attach_group(f, kCelebrityGroup, cfg.n_celebrities, [k](double p) { return p > k; },
                 cfg.p_celeb, rng);
    return finalize(std::move(f), cfg);
}

} // namespace popcent
