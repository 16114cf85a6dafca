#include "dagvisit/random_dag.hpp"

#include <algorithm>

namespace dagvisit {

Dag random_layered_dag(const RandomDagOptions& opts, std::mt19937& rng) {
    const int n = opts.n;
    if (n <= 0) throw dag_error("random dag needs n >= 1");
    int width = opts.layer_width;
    if (width <= 0) {
        int hi = std::max(1, n / 2);
        width = std::uniform_int_distribution<int>(1, hi)(rng);
    }
    std::vector<int> layer_of(static_cast<size_t>(n));
    std::vector<VertexList> layers;
    for (int v = 0; v < n; ++v) {
        int l = v / width;
        layer_of[static_cast<size_t>(v)] = l;
        if (l == static_cast<int>(layers.size())) layers.emplace_back();
        layers[static_cast<size_t>(l)].push_back(v);
    }
    std::vector<int> out_deg(static_cast<size_t>(n), 0);
    std::vector<Edge> edges;
    for (int v = 0; v < n; ++v) {
        int l = layer_of[static_cast<size_t>(v)];
        if (l == 0) continue;
        VertexList pool;
        for (int pl = std::max(0, l - opts.back_layers); pl < l; ++pl)
            for (Vertex u : layers[static_cast<size_t>(pl)])
                if (out_deg[static_cast<size_t>(u)] < opts.max_out) pool.push_back(u);
        if (pool.empty())
            for (Vertex u : layers[static_cast<size_t>(l - 1)]) pool.push_back(u);
        int want = std::uniform_int_distribution<int>(
            1, std::min<int>(opts.max_in, static_cast<int>(pool.size())))(rng);
        std::shuffle(pool.begin(), pool.end(), rng);
        for (int i = 0; i < want; ++i) {
            edges.emplace_back(pool[static_cast<size_t>(i)], v);
            ++out_deg[static_cast<size_t>(pool[static_cast<size_t>(i)])];
        }
    }
    if (opts.no_isolated_io && !layers.empty() && layers.size() > 1) {
        // A first-layer vertex nobody picked would be an input and an output.
        for (Vertex u : layers[0])
            if (out_deg[static_cast<size_t>(u)] == 0) {
                VertexList& next = layers[1];
                Vertex tgt =
                    next[static_cast<size_t>(std::uniform_int_distribution<int>(
                        0, static_cast<int>(next.size()) - 1)(rng))];
                edges.emplace_back(u, tgt);
                ++out_deg[static_cast<size_t>(u)];
            }
    }
    return Dag(n, edges);
}

}  // namespace dagvisit
