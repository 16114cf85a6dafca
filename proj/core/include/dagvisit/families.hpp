#pragma once

#include <map>
#include <string>
#include <variant>

#include "dagvisit/dag.hpp"

namespace dagvisit {

struct PyramidSpec {
    int q = 2;  // fan, >= 2
    int b = 1;  // height, >= 1
};
struct ReversePyramidSpec {
    int q = 2;
    int b = 1;
};
struct TreeSpec {
    int q = 2;       // arity, >= 2
    int levels = 0;  // q^levels leaves, >= 0
};
struct DiamondSpec {
    int q = 2;  // >= 2
    int b = 2;  // side, >= 2
};
struct ChainArborescenceSpec {
    int h = 1;  // arborescence height, >= 1; n = 2*(2^h - 1)
};
struct ExplicitSpec {
    int n = 0;
    std::vector<Edge> edges;
};

using FamilySpec = std::variant<PyramidSpec, ReversePyramidSpec, TreeSpec, DiamondSpec,
                                ChainArborescenceSpec, ExplicitSpec>;

/// Generator bookkeeping kept alongside the Dag. Layers are 0-based.
struct DagMeta {
    std::string family;
    std::map<std::string, int> params;
    std::vector<int> layer;
    std::vector<int> offset;                // 0-based position within layer
    std::vector<std::pair<int, int>> coords;  // mesh (x, y); only for q=2 diamonds
    std::vector<char> on_diagonal;          // only for diamonds
    int diamond_q = 0;
    int diamond_b = 0;

    bool is_mesh_diamond() const { return !coords.empty(); }
};

struct GeneratedDag {
    Dag dag;
    DagMeta meta;
};

GeneratedDag generate(const FamilySpec& spec);

/// Edge-reversed copy carrying the same metadata (ids are preserved).
GeneratedDag reversed(const GeneratedDag& g);

/// Parses CLI strings such as "diamond:q=2,b=32" or "tree:q=2,i=3".
FamilySpec parse_family(const std::string& text);
std::string family_to_string(const FamilySpec& spec);

}  // namespace dagvisit
