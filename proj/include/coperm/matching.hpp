#pragma once

// Bipartite matching machinery: complement degree, Hopcroft-Karp maximum
// matching over bit-row adjacency, degree-constrained (k-factor) subgraphs
// via Dinic max-flow, the ((n-2D)/e)^n perfect-matching count bound for
// dense balanced graphs, and a seeded sampler for coprime perfect matchings
// (shuffled greedy pass, then augmenting-path repair).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coperm/bitmatrix.hpp"
#include "coperm/rng.hpp"

namespace coperm {

struct BipartiteGraph {
    int n_left = 0;
    int n_right = 0;
    BitMatrix adj;

    static BipartiteGraph complete(int nl, int nr) {
        BipartiteGraph g;
        g.n_left = nl;
        g.n_right = nr;
        g.adj = BitMatrix(nl, nr);
        for (int r = 0; r < nl; ++r)
            for (int c = 0; c < nr; ++c) g.adj.set(r, c, true);
        return g;
    }
};

/// Maximum degree of the bipartite complement: max over all vertices of
/// (opposite side size - degree).
inline int complement_max_degree(const BipartiteGraph& g) {
    int worst = 0;
    for (int r = 0; r < g.n_left; ++r)
        worst = std::max(worst, g.n_right - g.adj.row_degree(r));
    for (int c = 0; c < g.n_right; ++c)
        worst = std::max(worst, g.n_left - g.adj.col_degree(c));
    return worst;
}

namespace detail {

inline constexpr int kUnmatched = -1;

// Hopcroft-Karp phases on top of an existing partial matching. Returns the
// final matching size.
inline int hopcroft_karp(const BitMatrix& adj, std::vector<int>& match_l,
                         std::vector<int>& match_r) {
    const int nl = adj.rows();
    const int nr = adj.cols();
    const int words = adj.words_per_row();
    const int inf = nl + nr + 1;
    std::vector<int> dist(static_cast<std::size_t>(nl));
    std::vector<int> queue_buf(static_cast<std::size_t>(nl));

    int size = 0;
    for (int u = 0; u < nl; ++u)
        if (match_l[static_cast<std::size_t>(u)] != kUnmatched) ++size;

    auto bfs = [&]() -> bool {
        int head = 0, tail = 0;
        for (int u = 0; u < nl; ++u) {
            if (match_l[static_cast<std::size_t>(u)] == kUnmatched) {
                dist[static_cast<std::size_t>(u)] = 0;
                queue_buf[tail++] = u;
            } else {
                dist[static_cast<std::size_t>(u)] = inf;
            }
        }
        bool reached_free = false;
        while (head < tail) {
            const int u = queue_buf[head++];
            const std::uint64_t* row = adj.row(u);
            for (int w = 0; w < words; ++w) {
                std::uint64_t bits = row[w];
                while (bits != 0) {
                    const int v = w * 64 + std::countr_zero(bits);
                    bits &= bits - 1;
                    const int m = match_r[static_cast<std::size_t>(v)];
                    if (m == kUnmatched) {
                        reached_free = true;
                    } else if (dist[static_cast<std::size_t>(m)] == inf) {
                        dist[static_cast<std::size_t>(m)] = dist[static_cast<std::size_t>(u)] + 1;
                        queue_buf[tail++] = m;
                    }
                }
            }
        }
        return reached_free;
    };

    auto dfs = [&](auto&& self, int u) -> bool {
        const std::uint64_t* row = adj.row(u);
        for (int w = 0; w < words; ++w) {
            std::uint64_t bits = row[w];
            while (bits != 0) {
                const int v = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                const int m = match_r[static_cast<std::size_t>(v)];
                if (m == kUnmatched ||
                    (dist[static_cast<std::size_t>(m)] == dist[static_cast<std::size_t>(u)] + 1 &&
                     self(self, m))) {
                    match_l[static_cast<std::size_t>(u)] = v;
                    match_r[static_cast<std::size_t>(v)] = u;
                    return true;
                }
            }
        }
        dist[static_cast<std::size_t>(u)] = inf;
        return false;
    };

    while (bfs()) {
        for (int u = 0; u < nl; ++u)
            if (match_l[static_cast<std::size_t>(u)] == kUnmatched && dfs(dfs, u)) ++size;
    }
    return size;
}

class Dinic {
public:
    explicit Dinic(int nodes) : graph_(static_cast<std::size_t>(nodes)) {}

    /// Returns the index of the forward arc in `from`'s adjacency list.
    int add_edge(int from, int to, int cap) {
        const int idx = static_cast<int>(graph_[static_cast<std::size_t>(from)].size());
        graph_[static_cast<std::size_t>(from)].push_back(
            {to, cap, static_cast<int>(graph_[static_cast<std::size_t>(to)].size())});
        graph_[static_cast<std::size_t>(to)].push_back({from, 0, idx});
        return idx;
    }

    int max_flow(int s, int t) {
        int flow = 0;
        while (bfs(s, t)) {
            iter_.assign(graph_.size(), 0);
            int f;
            while ((f = dfs(s, t, 1 << 29)) > 0) flow += f;
        }
        return flow;
    }

    /// Residual capacity of the i-th edge out of `from` (insertion order).
    int edge_cap(int from, int i) const {
        return graph_[static_cast<std::size_t>(from)][static_cast<std::size_t>(i)].cap;
    }

private:
    struct Edge {
        int to, cap, rev;
    };

    bool bfs(int s, int t) {
        level_.assign(graph_.size(), -1);
        std::queue<int> q;
        level_[static_cast<std::size_t>(s)] = 0;
        q.push(s);
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            for (const Edge& e : graph_[static_cast<std::size_t>(v)]) {
                if (e.cap > 0 && level_[static_cast<std::size_t>(e.to)] < 0) {
                    level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(v)] + 1;
                    q.push(e.to);
                }
            }
        }
        return level_[static_cast<std::size_t>(t)] >= 0;
    }

    int dfs(int v, int t, int f) {
        if (v == t) return f;
        for (int& i = iter_[static_cast<std::size_t>(v)];
             i < static_cast<int>(graph_[static_cast<std::size_t>(v)].size()); ++i) {
            Edge& e = graph_[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
            if (e.cap <= 0 || level_[static_cast<std::size_t>(v)] >= level_[static_cast<std::size_t>(e.to)])
                continue;
            const int d = dfs(e.to, t, std::min(f, e.cap));
            if (d > 0) {
                e.cap -= d;
                graph_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)].cap += d;
                return d;
            }
        }
        return 0;
    }

    std::vector<std::vector<Edge>> graph_;
    std::vector<int> level_;
    std::vector<int> iter_;
};

}  // namespace detail

/// Spanning subgraph with every vertex of degree exactly k, or nothing when
/// none exists. Decided exactly by max-flow (source->left arcs of capacity
/// k, unit edge arcs, right->sink capacity k).
inline std::optional<BitMatrix> find_k_factor(const BipartiteGraph& g, int k) {
    if (g.n_left != g.n_right) throw std::invalid_argument("find_k_factor: graph must be balanced");
    if (k < 0) throw std::invalid_argument("find_k_factor: k must be >= 0");
    const int n = g.n_left;
    if (k == 0) return BitMatrix(n, n);

    const int source = 0;
    const int sink = 2 * n + 1;
    detail::Dinic dinic(2 * n + 2);
    for (int i = 0; i < n; ++i) dinic.add_edge(source, 1 + i, k);
    // Remember (col, edge slot) per row for extraction.
    std::vector<std::vector<std::pair<int, int>>> slots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!g.adj.get(i, j)) continue;
            const int slot = dinic.add_edge(1 + i, 1 + n + j, 1);
            slots[static_cast<std::size_t>(i)].push_back({j, slot});
        }
    }
    for (int j = 0; j < n; ++j) dinic.add_edge(1 + n + j, sink, k);

    if (dinic.max_flow(source, sink) != k * n) return std::nullopt;

    BitMatrix factor(n, n);
    for (int i = 0; i < n; ++i)
        for (const auto& [j, slot] : slots[static_cast<std::size_t>(i)])
            if (dinic.edge_cap(1 + i, slot) == 0) factor.set(i, j, true);
    return factor;
}

/// ((n - 2*delta)/e)^n, the perfect-matching count guarantee for a balanced
/// bipartite graph whose complement has maximum degree delta <= n/3.
/// Computed in log space.
inline double matching_count_lower_bound(int n, int delta) {
    if (n < 1) throw std::invalid_argument("matching_count_lower_bound: n must be >= 1");
    if (delta < 0 || 3 * delta > n)
        throw std::invalid_argument("matching_count_lower_bound: requires delta <= n/3");
    const double base = static_cast<double>(n - 2 * delta);
    return std::exp(static_cast<double>(n) * (std::log(base) - 1.0));
}

/// A perfect matching of the gcd=1 graph between two equal-size value lists,
/// or nothing when none exists. A shuffled greedy pass matches most
/// vertices; Hopcroft-Karp repairs the rest, and its final failed search
/// certifies absence. Output is ordered by left list position; identical
/// seeds give identical output. The sampled matching is NOT uniform over all
/// perfect matchings.
inline std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>>
random_coprime_matching(const std::vector<std::int64_t>& a,
                        const std::vector<std::int64_t>& b, Rng& rng) {
    if (a.size() != b.size())
        throw std::invalid_argument("random_coprime_matching: sides must have equal size");
    const int n = static_cast<int>(a.size());
    if (n == 0) return std::vector<std::pair<std::int64_t, std::int64_t>>{};

    BitMatrix adj(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (std::gcd(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]) == 1)
                adj.set(i, j, true);

    std::vector<int> match_l(static_cast<std::size_t>(n), detail::kUnmatched);
    std::vector<int> match_r(static_cast<std::size_t>(n), detail::kUnmatched);

    // Greedy pass in shuffled order; each vertex picks a uniform free neighbor.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const int words = adj.words_per_row();
    std::vector<std::uint64_t> free_mask(static_cast<std::size_t>(words), 0);
    for (int v = 0; v < n; ++v)
        free_mask[static_cast<std::size_t>(v / 64)] |= 1ULL << (v % 64);
    for (int u : order) {
        const std::uint64_t* row = adj.row(u);
        int candidates = 0;
        for (int w = 0; w < words; ++w)
            candidates += std::popcount(row[w] & free_mask[static_cast<std::size_t>(w)]);
        if (candidates == 0) continue;
        std::uint64_t pick = rng.below(static_cast<std::uint64_t>(candidates));
        for (int w = 0; w < words; ++w) {
            std::uint64_t bits = row[w] & free_mask[static_cast<std::size_t>(w)];
            const int here = std::popcount(bits);
            if (pick >= static_cast<std::uint64_t>(here)) {
                pick -= static_cast<std::uint64_t>(here);
                continue;
            }
            while (pick > 0) {
                bits &= bits - 1;
                --pick;
            }
            const int v = w * 64 + std::countr_zero(bits);
            match_l[static_cast<std::size_t>(u)] = v;
            match_r[static_cast<std::size_t>(v)] = u;
            free_mask[static_cast<std::size_t>(w)] &= ~(1ULL << (v % 64));
            break;
        }
    }

    if (detail::hopcroft_karp(adj, match_l, match_r) != n) return std::nullopt;

    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u)
        out.push_back({a[static_cast<std::size_t>(u)],
                       b[static_cast<std::size_t>(match_l[static_cast<std::size_t>(u)])]});
    return out;
}

}  // namespace coperm
