#pragma once

#include "dagvisit/dag.hpp"

namespace dagvisit {

/// Unit-vertex-capacity flow via vertex splitting; vertices in `unbounded`
/// get unlimited capacity. Small graphs only, augmenting-path search.
struct VertexFlowResult {
    int value = 0;
    VertexSet cut;                        // split vertices carrying the min cut
    std::vector<VertexList> paths;        // decomposed source-to-sink paths
};

VertexFlowResult max_vertex_flow(const Dag& d, const VertexSet& sources, const VertexSet& sinks,
                                 const VertexSet& unbounded);

}  // namespace dagvisit
