#include "dagvisit/maxflow.hpp"

#include <algorithm>
#include <queue>

namespace dagvisit {

namespace {

struct Arc {
    int to;
    int cap;
    int orig;
    int rev;  // index of the reverse arc in adj[to]
};

struct FlowNet {
    std::vector<std::vector<Arc>> adj;

    explicit FlowNet(int n) : adj(static_cast<size_t>(n)) {}

    void add(int u, int v, int cap) {
        adj[static_cast<size_t>(u)].push_back(
            {v, cap, cap, static_cast<int>(adj[static_cast<size_t>(v)].size())});
        adj[static_cast<size_t>(v)].push_back(
            {u, 0, 0, static_cast<int>(adj[static_cast<size_t>(u)].size()) - 1});
    }

    bool augment(int s, int t) {
        std::vector<std::pair<int, int>> parent(adj.size(), {-1, -1});
        std::queue<int> q;
        q.push(s);
        parent[static_cast<size_t>(s)] = {s, -1};
        while (!q.empty() && parent[static_cast<size_t>(t)].first < 0) {
            int u = q.front();
            q.pop();
            for (int i = 0; i < static_cast<int>(adj[static_cast<size_t>(u)].size()); ++i) {
                const Arc& a = adj[static_cast<size_t>(u)][static_cast<size_t>(i)];
                if (a.cap > 0 && parent[static_cast<size_t>(a.to)].first < 0) {
                    parent[static_cast<size_t>(a.to)] = {u, i};
                    q.push(a.to);
                }
            }
        }
        if (parent[static_cast<size_t>(t)].first < 0) return false;
        for (int v = t; v != s;) {
            auto [u, i] = parent[static_cast<size_t>(v)];
            Arc& a = adj[static_cast<size_t>(u)][static_cast<size_t>(i)];
            a.cap -= 1;
            adj[static_cast<size_t>(a.to)][static_cast<size_t>(a.rev)].cap += 1;
            v = u;
        }
        return true;
    }

    int flow(const Arc& a) const { return a.orig - a.cap; }

    std::vector<char> reachable(int s) const {
        std::vector<char> seen(adj.size(), 0);
        std::queue<int> q;
        q.push(s);
        seen[static_cast<size_t>(s)] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (const Arc& a : adj[static_cast<size_t>(u)])
                if (a.cap > 0 && !seen[static_cast<size_t>(a.to)]) {
                    seen[static_cast<size_t>(a.to)] = 1;
                    q.push(a.to);
                }
        }
        return seen;
    }

    // Cancel one unit of flow out of `node` and return the head it went to.
    int take_unit(int node) {
        for (Arc& a : adj[static_cast<size_t>(node)])
            if (flow(a) > 0) {
                a.cap += 1;
                adj[static_cast<size_t>(a.to)][static_cast<size_t>(a.rev)].cap -= 1;
                return a.to;
            }
        return -1;
    }
};

}  // namespace

VertexFlowResult max_vertex_flow(const Dag& d, const VertexSet& sources, const VertexSet& sinks,
                                 const VertexSet& unbounded) {
    const int n = d.n();
    const int INF = n + 2;
    // Node 2v = v_in, 2v+1 = v_out; source = 2n, sink = 2n+1.
    FlowNet net(2 * n + 2);
    const int S = 2 * n, T = 2 * n + 1;
    for (int v = 0; v < n; ++v) {
        net.add(2 * v, 2 * v + 1, vset::contains(unbounded, v) ? INF : 1);
        for (Vertex w : d.succs(v)) net.add(2 * v + 1, 2 * w, INF);
    }
    for (Vertex v : sources) net.add(S, 2 * v, INF);
    for (Vertex v : sinks) net.add(2 * v + 1, T, INF);

    VertexFlowResult out;
    while (net.augment(S, T)) ++out.value;

    std::vector<char> seen = net.reachable(S);
    for (int v = 0; v < n; ++v)
        if (seen[static_cast<size_t>(2 * v)] && !seen[static_cast<size_t>(2 * v + 1)])
            out.cut.push_back(v);

    for (int unit = 0; unit < out.value; ++unit) {
        VertexList path;
        int node = net.take_unit(S);
        if (node < 0) throw dag_error("flow decomposition failed at the source");
        while (node != T) {
            if (node % 2 == 0) path.push_back(node / 2);
            node = net.take_unit(node);
            if (node < 0) throw dag_error("flow decomposition failed");
        }
        out.paths.push_back(std::move(path));
    }
    return out;
}

}  // namespace dagvisit
