#include "dagvisit/families.hpp"

#include <algorithm>
#include <sstream>

namespace dagvisit {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw dag_error("family parameter out of range: " + msg);
}

GeneratedDag make_pyramid(int q, int b) {
    require(q >= 2, "pyramid needs q >= 2");
    require(b >= 1, "pyramid needs b >= 1");
    // Layer i (0-based) has (q-1)(b-1-i)+1 vertices; layer 0 holds the inputs.
    std::vector<int> layer_size(static_cast<size_t>(b));
    std::vector<int> layer_start(static_cast<size_t>(b));
    int n = 0;
    for (int i = 0; i < b; ++i) {
        layer_start[static_cast<size_t>(i)] = n;
        layer_size[static_cast<size_t>(i)] = (q - 1) * (b - 1 - i) + 1;
        n += layer_size[static_cast<size_t>(i)];
    }
    GeneratedDag out;
    out.meta.family = "pyramid";
    out.meta.params = {{"q", q}, {"b", b}};
    out.meta.layer.resize(static_cast<size_t>(n));
    out.meta.offset.resize(static_cast<size_t>(n));
    std::vector<Edge> edges;
    for (int i = 0; i < b; ++i) {
        for (int j = 0; j < layer_size[static_cast<size_t>(i)]; ++j) {
            int v = layer_start[static_cast<size_t>(i)] + j;
            out.meta.layer[static_cast<size_t>(v)] = i;
            out.meta.offset[static_cast<size_t>(v)] = j;
            if (i > 0)
                for (int t = 0; t < q; ++t)
                    edges.emplace_back(layer_start[static_cast<size_t>(i - 1)] + j + t, v);
        }
    }
    out.dag = Dag(n, edges);
    return out;
}

GeneratedDag make_tree(int q, int levels) {
    require(q >= 2, "tree needs q >= 2");
    require(levels >= 0, "tree needs i >= 0");
    // Complete q-ary in-tree: leaves first (level 0), root last.
    std::vector<int> width(static_cast<size_t>(levels + 1));
    std::vector<int> start(static_cast<size_t>(levels + 1));
    int n = 0;
    int w = 1;
    for (int k = 0; k < levels; ++k) w *= q;  // q^levels leaves
    for (int k = 0; k <= levels; ++k) {
        start[static_cast<size_t>(k)] = n;
        width[static_cast<size_t>(k)] = w;
        n += w;
        w /= q;
    }
    GeneratedDag out;
    out.meta.family = "tree";
    out.meta.params = {{"q", q}, {"i", levels}};
    out.meta.layer.resize(static_cast<size_t>(n));
    out.meta.offset.resize(static_cast<size_t>(n));
    std::vector<Edge> edges;
    for (int k = 0; k <= levels; ++k)
        for (int j = 0; j < width[static_cast<size_t>(k)]; ++j) {
            int v = start[static_cast<size_t>(k)] + j;
            out.meta.layer[static_cast<size_t>(v)] = k;
            out.meta.offset[static_cast<size_t>(v)] = j;
            if (k < levels) edges.emplace_back(v, start[static_cast<size_t>(k + 1)] + j / q);
        }
    out.dag = Dag(n, edges);
    return out;
}

GeneratedDag make_diamond(int q, int b) {
    require(q >= 2, "diamond needs q >= 2");
    require(b >= 2, "diamond needs b >= 2");
    // Reverse q-pyramid of height b fused with a q-pyramid of height b at the
    // widest (diagonal) layer. 0-based layers 0..2b-2; diagonal at layer b-1.
    const int layers = 2 * b - 1;
    std::vector<int> layer_size(static_cast<size_t>(layers));
    std::vector<int> layer_start(static_cast<size_t>(layers));
    int n = 0;
    for (int l = 0; l < layers; ++l) {
        layer_start[static_cast<size_t>(l)] = n;
        int h = l <= b - 1 ? l : 2 * b - 2 - l;
        layer_size[static_cast<size_t>(l)] = (q - 1) * h + 1;
        n += layer_size[static_cast<size_t>(l)];
    }
    const int expected = (b - 1) * (2 + (q - 1) * (b - 1)) + 1;
    if (n != expected) throw dag_error("diamond vertex count mismatch");

    GeneratedDag out;
    out.meta.family = "diamond";
    out.meta.params = {{"q", q}, {"b", b}};
    out.meta.diamond_q = q;
    out.meta.diamond_b = b;
    out.meta.layer.resize(static_cast<size_t>(n));
    out.meta.offset.resize(static_cast<size_t>(n));
    out.meta.on_diagonal.assign(static_cast<size_t>(n), 0);
    if (q == 2) out.meta.coords.resize(static_cast<size_t>(n));
    std::vector<Edge> edges;
    for (int l = 0; l < layers; ++l) {
        const int sz = layer_size[static_cast<size_t>(l)];
        for (int j = 0; j < sz; ++j) {
            int v = layer_start[static_cast<size_t>(l)] + j;
            out.meta.layer[static_cast<size_t>(v)] = l;
            out.meta.offset[static_cast<size_t>(v)] = j;
            out.meta.on_diagonal[static_cast<size_t>(v)] = l == b - 1 ? 1 : 0;
            if (q == 2) {
                int x = l <= b - 1 ? j : j + (l - (b - 1));
                out.meta.coords[static_cast<size_t>(v)] = {x, l - x};
            }
            if (l + 1 < layers) {
                const int next = layer_start[static_cast<size_t>(l + 1)];
                const int next_sz = layer_size[static_cast<size_t>(l + 1)];
                if (l < b - 1) {
                    for (int t = 0; t < q; ++t) edges.emplace_back(v, next + j + t);
                } else {
                    for (int t = 0; t < q; ++t)
                        if (j - t >= 0 && j - t < next_sz) edges.emplace_back(v, next + j - t);
                }
            }
        }
    }
    out.dag = Dag(n, edges);
    return out;
}

GeneratedDag make_chain_arborescence(int h) {
    require(h >= 1, "chain-arborescence needs h >= 1");
    // m chain vertices c_1..c_m feed the m vertices of a complete binary
    // arborescence listed in reverse-BFS order (leaves first, root last):
    // ids interleave as c_1, t_1, c_2, t_2, ..., t_m so that within each BFS
    // level the tree vertex precedes the next chain vertex.
    const int m = (1 << h) - 1;
    const int n = 2 * m;
    auto chain_id = [](int i) { return 2 * (i - 1); };   // i in 1..m
    auto tree_id = [](int j) { return 2 * j - 1; };      // j in 1..m, reverse-BFS index
    std::vector<Edge> edges;
    for (int i = 1; i < m; ++i) edges.emplace_back(chain_id(i), chain_id(i + 1));
    for (int i = 1; i <= m; ++i) edges.emplace_back(chain_id(i), tree_id(i));
    // Heap order s_1..s_m (root = s_1); reverse-BFS index j = m + 1 - k.
    for (int k = 1; k <= m; ++k)
        for (int c = 2 * k; c <= std::min(2 * k + 1, m); ++c)
            edges.emplace_back(tree_id(m + 1 - k), tree_id(m + 1 - c));
    GeneratedDag out;
    out.meta.family = "chain-arborescence";
    out.meta.params = {{"h", h}};
    out.meta.layer.resize(static_cast<size_t>(n));
    out.meta.offset.resize(static_cast<size_t>(n));
    for (int i = 1; i <= m; ++i) {
        out.meta.layer[static_cast<size_t>(chain_id(i))] = i - 1;
        out.meta.offset[static_cast<size_t>(chain_id(i))] = 1;
        out.meta.layer[static_cast<size_t>(tree_id(i))] = i;
        out.meta.offset[static_cast<size_t>(tree_id(i))] = 0;
    }
    out.dag = Dag(n, edges);
    return out;
}

}  // namespace

GeneratedDag generate(const FamilySpec& spec) {
    return std::visit(
        [](const auto& s) -> GeneratedDag {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PyramidSpec>) {
                return make_pyramid(s.q, s.b);
            } else if constexpr (std::is_same_v<T, ReversePyramidSpec>) {
                GeneratedDag g = make_pyramid(s.q, s.b);
                g.dag = reverse(g.dag);
                g.meta.family = "reverse-pyramid";
                return g;
            } else if constexpr (std::is_same_v<T, TreeSpec>) {
                return make_tree(s.q, s.levels);
            } else if constexpr (std::is_same_v<T, DiamondSpec>) {
                return make_diamond(s.q, s.b);
            } else if constexpr (std::is_same_v<T, ChainArborescenceSpec>) {
                return make_chain_arborescence(s.h);
            } else {
                GeneratedDag g;
                g.dag = Dag(s.n, s.edges);
                g.meta.family = "explicit";
                g.meta.params = {{"n", s.n}};
                return g;
            }
        },
        spec);
}

GeneratedDag reversed(const GeneratedDag& g) {
    GeneratedDag out;
    out.dag = reverse(g.dag);
    out.meta = g.meta;
    out.meta.family = g.meta.family.starts_with("reverse-") ? g.meta.family.substr(8)
                                                            : "reverse-" + g.meta.family;
    return out;
}

namespace {

std::map<std::string, long long> parse_kv(const std::string& text) {
    std::map<std::string, long long> kv;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw dag_error("bad family parameter: " + item);
        kv[item.substr(0, eq)] = std::stoll(item.substr(eq + 1));
    }
    return kv;
}

long long take(std::map<std::string, long long>& kv, const std::string& key, long long dflt,
               bool required) {
    auto it = kv.find(key);
    if (it == kv.end()) {
        if (required) throw dag_error("missing family parameter '" + key + "'");
        return dflt;
    }
    long long v = it->second;
    kv.erase(it);
    return v;
}

}  // namespace

FamilySpec parse_family(const std::string& text) {
    auto colon = text.find(':');
    std::string name = text.substr(0, colon);
    auto kv = colon == std::string::npos ? std::map<std::string, long long>{}
                                         : parse_kv(text.substr(colon + 1));
    FamilySpec spec;
    if (name == "pyramid") {
        spec = PyramidSpec{static_cast<int>(take(kv, "q", 2, true)),
                           static_cast<int>(take(kv, "b", 1, true))};
    } else if (name == "reverse-pyramid") {
        spec = ReversePyramidSpec{static_cast<int>(take(kv, "q", 2, true)),
                                  static_cast<int>(take(kv, "b", 1, true))};
    } else if (name == "tree") {
        spec = TreeSpec{static_cast<int>(take(kv, "q", 2, true)),
                        static_cast<int>(take(kv, "i", 0, true))};
    } else if (name == "diamond") {
        spec = DiamondSpec{static_cast<int>(take(kv, "q", 2, true)),
                           static_cast<int>(take(kv, "b", 2, true))};
    } else if (name == "chain-arborescence") {
        spec = ChainArborescenceSpec{static_cast<int>(take(kv, "h", 1, true))};
    } else {
        throw dag_error("unknown family '" + name + "'");
    }
    if (!kv.empty()) throw dag_error("unknown family parameter '" + kv.begin()->first + "'");
    return spec;
}

std::string family_to_string(const FamilySpec& spec) {
    std::ostringstream os;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PyramidSpec>)
                os << "pyramid:q=" << s.q << ",b=" << s.b;
            else if constexpr (std::is_same_v<T, ReversePyramidSpec>)
                os << "reverse-pyramid:q=" << s.q << ",b=" << s.b;
            else if constexpr (std::is_same_v<T, TreeSpec>)
                os << "tree:q=" << s.q << ",i=" << s.levels;
            else if constexpr (std::is_same_v<T, DiamondSpec>)
                os << "diamond:q=" << s.q << ",b=" << s.b;
            else if constexpr (std::is_same_v<T, ChainArborescenceSpec>)
                os << "chain-arborescence:h=" << s.h;
            else
                os << "explicit:n=" << s.n;
        },
        spec);
    return os.str();
}

}  // namespace dagvisit
