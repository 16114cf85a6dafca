#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dagvisit {

using Vertex = int;
using VertexList = std::vector<Vertex>;
// Sorted, duplicate-free vertex set.
using VertexSet = std::vector<Vertex>;
using Edge = std::pair<Vertex, Vertex>;

namespace vset {

bool contains(const VertexSet& s, Vertex v);
VertexSet from_unsorted(VertexList items);
VertexSet unite(const VertexSet& a, const VertexSet& b);
VertexSet intersect(const VertexSet& a, const VertexSet& b);
VertexSet subtract(const VertexSet& a, const VertexSet& b);
bool is_subset(const VertexSet& a, const VertexSet& b);

}  // namespace vset

class dag_error : public std::runtime_error {
public:
    explicit dag_error(const std::string& what) : std::runtime_error(what) {}
};

/// Immutable DAG with dense vertex ids and both adjacency directions.
class Dag {
public:
    Dag() = default;
    Dag(int n, const std::vector<Edge>& edges);

    int n() const { return n_; }
    const VertexSet& preds(Vertex v) const { return preds_.at(static_cast<size_t>(v)); }
    const VertexSet& succs(Vertex v) const { return succs_.at(static_cast<size_t>(v)); }
    const VertexSet& inputs() const { return inputs_; }
    const VertexSet& outputs() const { return outputs_; }

    int edge_count() const { return edge_count_; }
    std::vector<Edge> edge_list() const;
    int max_in_degree() const;
    int max_out_degree() const;

    void check_vertex(Vertex v) const;

private:
    int n_ = 0;
    int edge_count_ = 0;
    std::vector<VertexSet> preds_;
    std::vector<VertexSet> succs_;
    VertexSet inputs_;
    VertexSet outputs_;
};

Dag reverse(const Dag& d);

/// Number of edges on a longest directed path (0 for edgeless graphs).
int topological_depth(const Dag& d);

/// Kahn's algorithm, smallest ready id first. Deterministic.
VertexList topological_order(const Dag& d);

/// Vertices reachable from v by a nonempty directed path (v excluded).
VertexSet descendants(const Dag& d, Vertex v);
VertexSet ancestors(const Dag& d, Vertex v);

struct InducedSubdag {
    Dag dag;
    std::vector<Vertex> to_sub;  // original id -> sub id, -1 when dropped
    VertexList to_orig;          // sub id -> original id
};

InducedSubdag induced_subdag(const Dag& d, const VertexSet& keep);

}  // namespace dagvisit
