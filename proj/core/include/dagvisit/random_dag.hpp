#pragma once

#include <random>

#include "dagvisit/dag.hpp"

namespace dagvisit {

struct RandomDagOptions {
    int n = 10;
    int max_in = 3;
    int max_out = 5;
    int back_layers = 3;       // predecessors drawn from up to this many previous layers
    int layer_width = 0;       // 0 draws a width from the generator
    bool no_isolated_io = false;  // guarantee no vertex is both input and output
};

/// Seeded layered DAG: fixed vertex count per layer, ids layer-major, each
/// non-first-layer vertex draws 1..max_in predecessors from the previous
/// back_layers layers, skipping saturated out-degrees.
Dag random_layered_dag(const RandomDagOptions& opts, std::mt19937& rng);

}  // namespace dagvisit
