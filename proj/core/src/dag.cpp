#include "dagvisit/dag.hpp"

#include <algorithm>
#include <queue>

namespace dagvisit {

namespace vset {

bool contains(const VertexSet& s, Vertex v) {
    return std::binary_search(s.begin(), s.end(), v);
}

VertexSet from_unsorted(VertexList items) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    return items;
}

VertexSet unite(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet intersect(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet subtract(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace vset

Dag::Dag(int n, const std::vector<Edge>& edges) : n_(n) {
    if (n < 0) throw dag_error("vertex count must be nonnegative");
    preds_.resize(static_cast<size_t>(n));
    succs_.resize(static_cast<size_t>(n));
    for (const auto& [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw dag_error("edge endpoint out of range: (" + std::to_string(u) + "," +
                            std::to_string(v) + ")");
        if (u == v) throw dag_error("self-loop at vertex " + std::to_string(u));
        succs_[static_cast<size_t>(u)].push_back(v);
        preds_[static_cast<size_t>(v)].push_back(u);
    }
    for (int v = 0; v < n; ++v) {
        auto& p = preds_[static_cast<size_t>(v)];
        auto& s = succs_[static_cast<size_t>(v)];
        std::sort(p.begin(), p.end());
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(p.begin(), p.end()) != p.end())
            throw dag_error("duplicate edge into vertex " + std::to_string(v));
        edge_count_ += static_cast<int>(s.size());
        if (p.empty()) inputs_.push_back(v);
        if (s.empty()) outputs_.push_back(v);
    }
    if (static_cast<int>(topological_order(*this).size()) != n)
        throw dag_error("graph contains a directed cycle");
}

std::vector<Edge> Dag::edge_list() const {
    std::vector<Edge> edges;
    edges.reserve(static_cast<size_t>(edge_count_));
    for (int u = 0; u < n_; ++u)
        for (Vertex v : succs_[static_cast<size_t>(u)]) edges.emplace_back(u, v);
    return edges;
}

int Dag::max_in_degree() const {
    size_t d = 0;
    for (const auto& p : preds_) d = std::max(d, p.size());
    return static_cast<int>(d);
}

int Dag::max_out_degree() const {
    size_t d = 0;
    for (const auto& s : succs_) d = std::max(d, s.size());
    return static_cast<int>(d);
}

void Dag::check_vertex(Vertex v) const {
    if (v < 0 || v >= n_) throw dag_error("invalid vertex id " + std::to_string(v));
}

Dag reverse(const Dag& d) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<size_t>(d.edge_count()));
    for (const auto& [u, v] : d.edge_list()) edges.emplace_back(v, u);
    return Dag(d.n(), edges);
}

VertexList topological_order(const Dag& d) {
    const int n = d.n();
    std::vector<int> indeg(static_cast<size_t>(n));
    std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
    for (int v = 0; v < n; ++v) {
        indeg[static_cast<size_t>(v)] = static_cast<int>(d.preds(v).size());
        if (indeg[static_cast<size_t>(v)] == 0) ready.push(v);
    }
    VertexList order;
    order.reserve(static_cast<size_t>(n));
    while (!ready.empty()) {
        Vertex v = ready.top();
        ready.pop();
        order.push_back(v);
        for (Vertex w : d.succs(v))
            if (--indeg[static_cast<size_t>(w)] == 0) ready.push(w);
    }
    return order;
}

int topological_depth(const Dag& d) {
    std::vector<int> depth(static_cast<size_t>(d.n()), 0);
    int best = 0;
    for (Vertex v : topological_order(d)) {
        for (Vertex p : d.preds(v))
            depth[static_cast<size_t>(v)] =
                std::max(depth[static_cast<size_t>(v)], depth[static_cast<size_t>(p)] + 1);
        best = std::max(best, depth[static_cast<size_t>(v)]);
    }
    return best;
}

namespace {

VertexSet reach_from(const Dag& d, Vertex v, bool forward) {
    d.check_vertex(v);
    std::vector<char> seen(static_cast<size_t>(d.n()), 0);
    VertexList stack{v};
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        const auto& next = forward ? d.succs(u) : d.preds(u);
        for (Vertex w : next)
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                stack.push_back(w);
            }
    }
    VertexSet out;
    for (int u = 0; u < d.n(); ++u)
        if (seen[static_cast<size_t>(u)]) out.push_back(u);
    return out;
}

}  // namespace

VertexSet descendants(const Dag& d, Vertex v) { return reach_from(d, v, true); }
VertexSet ancestors(const Dag& d, Vertex v) { return reach_from(d, v, false); }

InducedSubdag induced_subdag(const Dag& d, const VertexSet& keep) {
    InducedSubdag out;
    out.to_sub.assign(static_cast<size_t>(d.n()), -1);
    out.to_orig.reserve(keep.size());
    for (Vertex v : keep) {
        d.check_vertex(v);
        out.to_sub[static_cast<size_t>(v)] = static_cast<int>(out.to_orig.size());
        out.to_orig.push_back(v);
    }
    std::vector<Edge> edges;
    for (Vertex u : keep)
        for (Vertex v : d.succs(u))
            if (out.to_sub[static_cast<size_t>(v)] >= 0)
                edges.emplace_back(out.to_sub[static_cast<size_t>(u)],
                                   out.to_sub[static_cast<size_t>(v)]);
    out.dag = Dag(static_cast<int>(keep.size()), edges);
    return out;
}

}  // namespace dagvisit
