#include "hexinject/matching.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>

namespace hexinject {

namespace {

// Exact maximum-weight matching with blossoms on a dense graph, O(n^3).
// Weights must be nonnegative; zero marks an absent edge. Classic primal-dual
// implementation over an adjacency matrix.
struct WeightedBlossom {
    struct E {
        int u, v;
        int64_t w;
    };
    static constexpr int64_t INF = std::numeric_limits<int64_t>::max() / 4;
    int n = 0, n_x = 0;
    std::vector<std::vector<E>> g;
    std::vector<int64_t> lab;
    std::vector<int> match, slack, st, pa, S, vis;
    std::vector<std::vector<int>> flower_from;
    std::vector<std::vector<int>> flower;
    std::deque<int> q;

    void init(int n_in) {
        n = n_in;
        int m = 2 * n + 2;
        g.assign(m, std::vector<E>(m));
        for (int u = 0; u < m; u++)
            for (int v = 0; v < m; v++) g[u][v] = {u, v, 0};
        lab.assign(m, 0);
        match.assign(m, 0);
        slack.assign(m, 0);
        st.assign(m, 0);
        pa.assign(m, 0);
        S.assign(m, 0);
        vis.assign(m, 0);
        flower_from.assign(m, std::vector<int>(n + 1, 0));
        flower.assign(m, {});
    }
    void add_edge(int u, int v, int64_t w) { g[u][v].w = g[v][u].w = w; }

    int64_t e_delta(const E& e) { return lab[e.u] + lab[e.v] - g[e.u][e.v].w * 2; }
    void update_slack(int u, int x) {
        if (!slack[x] || e_delta(g[u][x]) < e_delta(g[slack[x]][x])) slack[x] = u;
    }
    void set_slack(int x) {
        slack[x] = 0;
        for (int u = 1; u <= n; ++u)
            if (g[u][x].w > 0 && st[u] != x && S[st[u]] == 0) update_slack(u, x);
    }
    void q_push(int x) {
        if (x <= n) q.push_back(x);
        else
            for (int p : flower[x]) q_push(p);
    }
    void set_st(int x, int b) {
        st[x] = b;
        if (x > n)
            for (int p : flower[x]) set_st(p, b);
    }
    int get_pr(int b, int xr) {
        int pr = (int)(std::find(flower[b].begin(), flower[b].end(), xr) - flower[b].begin());
        if (pr % 2 == 1) {
            std::reverse(flower[b].begin() + 1, flower[b].end());
            return (int)flower[b].size() - pr;
        }
        return pr;
    }
    void set_match(int u, int v) {
        match[u] = g[u][v].v;
        if (u > n) {
            E e = g[u][v];
            int xr = flower_from[u][e.u];
            int pr = get_pr(u, xr);
            for (int i = 0; i < pr; ++i) set_match(flower[u][i], flower[u][i ^ 1]);
            set_match(xr, v);
            std::rotate(flower[u].begin(), flower[u].begin() + pr, flower[u].end());
        }
    }
    void augment(int u, int v) {
        for (;;) {
            int xnv = st[match[u]];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st[pa[xnv]]);
            u = st[pa[xnv]];
            v = xnv;
        }
    }
    int get_lca(int u, int v) {
        static thread_local int t = 0;
        for (++t; u || v; std::swap(u, v)) {
            if (u == 0) continue;
            if (vis[u] == t) return u;
            vis[u] = t;
            u = st[match[u]];
            if (u) u = st[pa[u]];
        }
        return 0;
    }
    void add_blossom(int u, int lca, int v) {
        int b = n + 1;
        while (b <= n_x && st[b]) ++b;
        if (b > n_x) ++n_x;
        lab[b] = 0;
        S[b] = 0;
        match[b] = match[lca];
        flower[b].clear();
        flower[b].push_back(lca);
        for (int x = u, y; x != lca; x = st[pa[y]]) {
            flower[b].push_back(x);
            flower[b].push_back(y = st[match[x]]);
            q_push(y);
        }
        std::reverse(flower[b].begin() + 1, flower[b].end());
        for (int x = v, y; x != lca; x = st[pa[y]]) {
            flower[b].push_back(x);
            flower[b].push_back(y = st[match[x]]);
            q_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= n_x; ++x) g[b][x].w = g[x][b].w = 0;
        for (int x = 1; x <= n; ++x) flower_from[b][x] = 0;
        for (int xs : flower[b]) {
            for (int x = 1; x <= n_x; ++x)
                if (g[b][x].w == 0 || e_delta(g[xs][x]) < e_delta(g[b][x])) {
                    g[b][x] = g[xs][x];
                    g[x][b] = g[x][xs];
                }
            for (int x = 1; x <= n; ++x)
                if (flower_from[xs][x]) flower_from[b][x] = xs;
        }
        set_slack(b);
    }
    void expand_blossom(int b) {
        for (int p : flower[b]) set_st(p, p);
        int xr = flower_from[b][g[b][pa[b]].u];
        int pr = get_pr(b, xr);
        for (int i = 0; i < pr; i += 2) {
            int xs = flower[b][i], xns = flower[b][i + 1];
            pa[xs] = g[xns][xs].u;
            S[xs] = 1;
            S[xns] = 0;
            slack[xs] = 0;
            set_slack(xns);
            q_push(xns);
        }
        S[xr] = 1;
        pa[xr] = pa[b];
        for (size_t i = pr + 1; i < flower[b].size(); ++i) {
            int xs = flower[b][(size_t)i];
            S[xs] = -1;
            set_slack(xs);
        }
        st[b] = 0;
    }
    bool on_found_edge(const E& e) {
        int u = st[e.u], v = st[e.v];
        if (S[v] == -1) {
            pa[v] = e.u;
            S[v] = 1;
            int nu = st[match[v]];
            slack[v] = slack[nu] = 0;
            S[nu] = 0;
            q_push(nu);
        } else if (S[v] == 0) {
            int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }
    bool matching() {
        for (int i = 1; i <= n_x; i++) {
            S[i] = -1;
            slack[i] = 0;
        }
        q.clear();
        for (int x = 1; x <= n_x; ++x)
            if (st[x] == x && !match[x]) {
                pa[x] = 0;
                S[x] = 0;
                q_push(x);
            }
        if (q.empty()) return false;
        for (;;) {
            while (!q.empty()) {
                int u = q.front();
                q.pop_front();
                if (S[st[u]] == 1) continue;
                for (int v = 1; v <= n; ++v)
                    if (g[u][v].w > 0 && st[u] != st[v]) {
                        if (e_delta(g[u][v]) == 0) {
                            if (on_found_edge(g[u][v])) return true;
                        } else {
                            update_slack(u, st[v]);
                        }
                    }
            }
            int64_t d = INF;
            for (int b = n + 1; b <= n_x; ++b)
                if (st[b] == b && S[b] == 1) d = std::min(d, lab[b] / 2);
            for (int x = 1; x <= n_x; ++x)
                if (st[x] == x && slack[x]) {
                    if (S[x] == -1) d = std::min(d, e_delta(g[slack[x]][x]));
                    else if (S[x] == 0) d = std::min(d, e_delta(g[slack[x]][x]) / 2);
                }
            for (int u = 1; u <= n; ++u) {
                if (S[st[u]] == 0) {
                    if (lab[u] <= d) return false;
                    lab[u] -= d;
                } else if (S[st[u]] == 1) {
                    lab[u] += d;
                }
            }
            for (int b = n + 1; b <= n_x; ++b)
                if (st[b] == b) {
                    if (S[b] == 0) lab[b] += d * 2;
                    else if (S[b] == 1) lab[b] -= d * 2;
                }
            q.clear();
            for (int x = 1; x <= n_x; ++x)
                if (st[x] == x && slack[x] && st[slack[x]] != x &&
                    e_delta(g[slack[x]][x]) == 0)
                    if (on_found_edge(g[slack[x]][x])) return true;
            for (int b = n + 1; b <= n_x; ++b)
                if (st[b] == b && S[b] == 1 && lab[b] == 0) expand_blossom(b);
        }
    }
    // Returns mate per vertex (1-indexed, 0 = unmatched).
    std::vector<int> solve() {
        n_x = n;
        for (int u = 0; u <= n; ++u) {
            st[u] = u;
            flower[u].clear();
        }
        int64_t w_max = 0;
        for (int u = 1; u <= n; ++u)
            for (int v = 1; v <= n; ++v) {
                flower_from[u][v] = (u == v ? u : 0);
                w_max = std::max(w_max, g[u][v].w);
            }
        for (int u = 1; u <= n; ++u) lab[u] = w_max;
        while (matching()) {
        }
        return std::vector<int>(match.begin() + 1, match.begin() + 1 + n);
    }
};

}  // namespace

std::vector<int> min_weight_perfect_matching(const std::vector<std::vector<int64_t>>& w) {
    int n = (int)w.size();
    if (n == 0) return {};
    if (n % 2) throw std::invalid_argument("perfect matching needs an even vertex count");
    int64_t max_w = 1;
    for (const auto& row : w)
        for (int64_t x : row) max_w = std::max(max_w, x);
    // Uniform shift: every perfect matching has n/2 edges, so maximizing
    // (big - w) minimizes total w while forcing maximum cardinality.
    int64_t big = max_w * (n / 2) + max_w + 2;
    WeightedBlossom bl;
    bl.init(n);
    for (int i = 0; i < n; i++)
        for (int j = i + 1; j < n; j++)
            if (w[i][j] >= 0) bl.add_edge(i + 1, j + 1, big - w[i][j]);
    std::vector<int> mate = bl.solve();
    std::vector<int> out(n, -1);
    for (int i = 0; i < n; i++) {
        if (mate[i] == 0) throw std::runtime_error("no perfect matching exists");
        out[i] = mate[i] - 1;
    }
    return out;
}

MwpmDecoder::MwpmDecoder(const DetectorGraph& graph, int threads) : graph_(&graph) {
    n_ = graph.node_count + 1;  // boundary is the last internal node
    adj_.assign(n_, {});
    for (uint32_t e = 0; e < graph.edges.size(); e++) {
        const auto& ed = graph.edges[e];
        uint32_t v = ed.v == DetectorGraph::kBoundary ? n_ - 1 : ed.v;
        adj_[ed.u].push_back({v, e});
        adj_[v].push_back({ed.u, e});
    }
    parity_words_ = (n_ + 63) / 64;
    dist_.assign((size_t)n_ * n_, std::numeric_limits<float>::infinity());
    parity_.assign((size_t)n_ * parity_words_, 0);
    if (threads <= 1 || n_ < 64) {
        for (uint32_t s = 0; s < n_; s++) dijkstra(s);
    } else {
        std::vector<std::thread> pool;
        std::atomic<uint32_t> next{0};
        for (int t = 0; t < threads; t++)
            pool.emplace_back([&] {
                for (;;) {
                    uint32_t s = next.fetch_add(1);
                    if (s >= n_) return;
                    dijkstra(s);
                }
            });
        for (auto& th : pool) th.join();
    }
}

void MwpmDecoder::dijkstra(uint32_t src) {
    std::vector<double> dist(n_, std::numeric_limits<double>::infinity());
    std::vector<uint8_t> par(n_, 0), done(n_, 0);
    using Item = std::pair<double, uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[src] = 0;
    heap.push({0, src});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (auto [v, e] : adj_[u]) {
            double nd = d + graph_->edges[e].weight;
            if (nd < dist[v]) {
                dist[v] = nd;
                par[v] = par[u] ^ (graph_->edges[e].flips_observable ? 1 : 0);
                heap.push({nd, v});
            }
        }
    }
    float* drow = dist_.data() + (size_t)src * n_;
    uint64_t* prow = parity_.data() + (size_t)src * parity_words_;
    for (uint32_t v = 0; v < n_; v++) {
        drow[v] = (float)dist[v];
        if (par[v]) prow[v >> 6] |= 1ull << (v & 63);
    }
}

double MwpmDecoder::distance(uint32_t a, uint32_t b) const {
    uint32_t bb = b == DetectorGraph::kBoundary ? n_ - 1 : b;
    return dist_[(size_t)a * n_ + bb];
}

bool MwpmDecoder::path_flips(uint32_t a, uint32_t b) const {
    uint32_t bb = b == DetectorGraph::kBoundary ? n_ - 1 : b;
    return (parity_[(size_t)a * parity_words_ + (bb >> 6)] >> (bb & 63)) & 1;
}

Correction MwpmDecoder::decode(const std::vector<uint32_t>& fired) const {
    Correction out;
    size_t k = fired.size();
    if (k == 0) return out;
    for (uint32_t f : fired)
        if (f >= graph_->node_count) throw std::runtime_error("fired detector outside graph");
    for (uint32_t f : fired)
        if (!std::isfinite(distance(f, DetectorGraph::kBoundary)))
            throw std::runtime_error("unreachable detector node: malformed graph");

    size_t n = 2 * k;
    std::vector<std::vector<int64_t>> w(n, std::vector<int64_t>(n, -1));
    for (size_t i = 0; i < k; i++) {
        for (size_t j = i + 1; j < k; j++) {
            double d = distance(fired[i], fired[j]);
            if (std::isfinite(d)) w[i][j] = w[j][i] = scaled(d);
        }
        w[i][k + i] = w[k + i][i] = scaled(distance(fired[i], DetectorGraph::kBoundary));
        for (size_t j = k; j < n; j++)
            if (j != k + i) w[i][j] = w[j][i] = -1;
    }
    for (size_t i = k; i < n; i++)
        for (size_t j = k; j < n; j++)
            if (i != j) w[i][j] = 0;

    std::vector<int> mate = min_weight_perfect_matching(w);
    for (size_t i = 0; i < k; i++) {
        int m = mate[i];
        if (m == (int)(k + i)) {
            out.matches.push_back({fired[i], DetectorGraph::kBoundary});
            out.total_weight_scaled += w[i][m];
            out.predicted_flip ^= path_flips(fired[i], DetectorGraph::kBoundary);
        } else if (m > (int)i && m < (int)k) {
            out.matches.push_back({fired[i], fired[m]});
            out.total_weight_scaled += w[i][m];
            out.predicted_flip ^= path_flips(fired[i], fired[m]);
        }
    }
    out.total_weight = (double)out.total_weight_scaled / kScale;
    return out;
}

Correction MwpmDecoder::brute_force_decode(const std::vector<uint32_t>& fired) const {
    if (fired.size() > 14)
        throw std::invalid_argument("brute_force_decode limited to 14 fired detectors");
    Correction out;
    size_t k = fired.size();
    if (k == 0) return out;
    for (uint32_t f : fired)
        if (!std::isfinite(distance(f, DetectorGraph::kBoundary)))
            throw std::runtime_error("unreachable detector node: malformed graph");

    std::vector<int> idx(k);
    for (size_t i = 0; i < k; i++) idx[i] = (int)i;
    std::vector<int> best_mate, mate(k, -2);
    int64_t best = std::numeric_limits<int64_t>::max();

    // Recursive enumeration: each unmatched node pairs with the boundary or
    // with a later unmatched node.
    std::function<void(int64_t)> rec = [&](int64_t acc) {
        if (acc >= best) return;
        int i = -1;
        for (size_t t = 0; t < k; t++)
            if (mate[t] == -2) {
                i = (int)t;
                break;
            }
        if (i < 0) {
            best = acc;
            best_mate = mate;
            return;
        }
        mate[i] = -1;  // boundary
        rec(acc + scaled(distance(fired[i], DetectorGraph::kBoundary)));
        mate[i] = -2;
        for (size_t j = i + 1; j < k; j++) {
            if (mate[j] != -2) continue;
            double d = distance(fired[i], fired[j]);
            if (!std::isfinite(d)) continue;
            mate[i] = (int)j;
            mate[j] = (int)i;
            rec(acc + scaled(d));
            mate[i] = mate[j] = -2;
        }
    };
    rec(0);

    out.total_weight_scaled = best;
    out.total_weight = (double)best / kScale;
    for (size_t i = 0; i < k; i++) {
        if (best_mate[i] == -1) {
            out.matches.push_back({fired[i], DetectorGraph::kBoundary});
            out.predicted_flip ^= path_flips(fired[i], DetectorGraph::kBoundary);
        } else if (best_mate[i] > (int)i) {
            out.matches.push_back({fired[i], fired[(size_t)best_mate[i]]});
            out.predicted_flip ^= path_flips(fired[i], fired[(size_t)best_mate[i]]);
        }
    }
    return out;
}

}  // namespace hexinject
