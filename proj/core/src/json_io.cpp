#include "dagvisit/json_io.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

namespace dagvisit {

using nlohmann::json;

std::string graph_to_json(const GeneratedDag& g) {
    json j;
    j["n"] = g.dag.n();
    j["edges"] = json::array();
    for (const auto& [u, v] : g.dag.edge_list()) j["edges"].push_back({u, v});
    json meta;
    if (!g.meta.family.empty()) meta["family"] = g.meta.family;
    if (!g.meta.params.empty()) meta["params"] = g.meta.params;
    if (!g.meta.layer.empty()) meta["layer"] = g.meta.layer;
    if (!g.meta.offset.empty()) meta["offset"] = g.meta.offset;
    if (!g.meta.coords.empty()) {
        json coords = json::array();
        for (auto [x, y] : g.meta.coords) coords.push_back({x, y});
        meta["coords"] = coords;
    }
    if (!g.meta.on_diagonal.empty()) {
        json diag = json::array();
        for (char c : g.meta.on_diagonal) diag.push_back(static_cast<int>(c));
        meta["diagonal"] = diag;
    }
    if (g.meta.diamond_q) meta["q"] = g.meta.diamond_q;
    if (g.meta.diamond_b) meta["b"] = g.meta.diamond_b;
    j["meta"] = meta;
    return j.dump();
}

GeneratedDag graph_from_json(const std::string& text) {
    json j = json::parse(text);
    GeneratedDag g;
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    g.dag = Dag(j.at("n").get<int>(), edges);
    if (j.contains("meta")) {
        const json& meta = j["meta"];
        if (meta.contains("family")) g.meta.family = meta["family"].get<std::string>();
        if (meta.contains("params"))
            g.meta.params = meta["params"].get<std::map<std::string, int>>();
        if (meta.contains("layer")) g.meta.layer = meta["layer"].get<std::vector<int>>();
        if (meta.contains("offset")) g.meta.offset = meta["offset"].get<std::vector<int>>();
        if (meta.contains("coords"))
            for (const auto& c : meta["coords"])
                g.meta.coords.emplace_back(c.at(0).get<int>(), c.at(1).get<int>());
        if (meta.contains("diagonal"))
            for (const auto& c : meta["diagonal"])
                g.meta.on_diagonal.push_back(static_cast<char>(c.get<int>()));
        if (meta.contains("q")) g.meta.diamond_q = meta["q"].get<int>();
        if (meta.contains("b")) g.meta.diamond_b = meta["b"].get<int>();
    }
    return g;
}

std::string to_dot(const GeneratedDag& g) {
    std::ostringstream os;
    os << "digraph g {\n";
    for (int v = 0; v < g.dag.n(); ++v) {
        os << "  v" << v;
        if (!g.meta.coords.empty())
            os << " [label=\"" << v << " (" << g.meta.coords[static_cast<size_t>(v)].first << ","
               << g.meta.coords[static_cast<size_t>(v)].second << ")\"]";
        os << ";\n";
    }
    for (const auto& [u, v] : g.dag.edge_list()) os << "  v" << u << " -> v" << v << ";\n";
    os << "}\n";
    return os.str();
}

std::string rule_to_json(const Dag& d, const VisitRule& r) {
    json j;
    switch (r.kind()) {
        case VisitRule::Kind::Top: j["kind"] = "top"; break;
        case VisitRule::Kind::Singleton: j["kind"] = "singleton"; break;
        case VisitRule::Kind::DiamondBlocked:
            j["kind"] = "diamond-blocked";
            j["side"] = r.block_side();
            break;
        case VisitRule::Kind::Explicit: {
            j["kind"] = "explicit";
            json table = json::object();
            for (int v = 0; v < d.n(); ++v) {
                json family = json::array();
                for (const VertexSet& q : r.enablers(d, v)) family.push_back(q);
                table[std::to_string(v)] = family;
            }
            j["table"] = table;
            break;
        }
    }
    return j.dump();
}

VisitRule rule_from_json(const Dag& d, const std::string& text) {
    json j = json::parse(text);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "top") return VisitRule::top(d);
    if (kind == "singleton") return VisitRule::singleton(d);
    if (kind == "explicit") {
        std::vector<std::vector<VertexSet>> table(static_cast<size_t>(d.n()));
        for (const auto& [key, family] : j.at("table").items()) {
            int v = std::stoi(key);
            d.check_vertex(v);
            for (const auto& q : family)
                table[static_cast<size_t>(v)].push_back(q.get<VertexSet>());
        }
        return VisitRule::explicit_rule(d, std::move(table));
    }
    throw dag_error("rule_from_json: unsupported kind '" + kind + "'");
}

VisitRule rule_from_string(const GeneratedDag& g, const std::string& text) {
    if (text == "top") return VisitRule::top(g.dag);
    if (text == "singleton") return VisitRule::singleton(g.dag);
    if (text.rfind("blocked:s=", 0) == 0)
        return VisitRule::diamond_blocked(g, std::stoi(text.substr(10)));
    if (text.rfind("file:", 0) == 0) {
        std::ifstream in(text.substr(5));
        if (!in) throw dag_error("cannot open rule file " + text.substr(5));
        std::stringstream buffer;
        buffer << in.rdbuf();
        return rule_from_json(g.dag, buffer.str());
    }
    throw dag_error("unknown rule '" + text + "' (use top | singleton | blocked:s=K | file:PATH)");
}

std::string visit_to_json(const VisitSequence& s) { return json(s.order).dump(); }

VisitSequence visit_from_json(const Dag& d, const std::string& text) {
    return VisitSequence::of(d, json::parse(text).get<VertexList>());
}

std::string trace_to_jsonl(const IoComputation& c) {
    std::ostringstream os;
    os << json{{"m", c.M}}.dump() << "\n";
    for (const IoStep& s : c.steps) {
        const char* op = s.op == StepKind::Compute ? "compute"
                        : s.op == StepKind::Read   ? "read"
                                                   : "write";
        os << json{{"op", op}, {"v", s.v}}.dump() << "\n";
    }
    return os.str();
}

IoComputation trace_from_jsonl(std::istream& in) {
    IoComputation c;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (first && j.contains("m")) {
            c.M = j["m"].get<int>();
            first = false;
            continue;
        }
        first = false;
        std::string op = j.at("op").get<std::string>();
        StepKind kind = op == "compute" ? StepKind::Compute
                       : op == "read"   ? StepKind::Read
                       : op == "write"  ? StepKind::Write
                                        : throw dag_error("bad trace op '" + op + "'");
        c.steps.push_back({kind, j.at("v").get<int>()});
    }
    return c;
}

std::string built_visit_to_json(const BuiltVisit& v) {
    json j;
    j["sequence"] = v.sequence.order;
    j["achieved"] = v.achieved_boundary;
    j["guarantee"] = v.guarantee;
    j["trace"] = v.trace;
    return j.dump();
}

std::string bound_report_to_json(const BoundReport& rep) {
    json j;
    j["metric"] = to_string(rep.metric);
    j["variant"] = to_string(rep.variant);
    j["value"] = rep.value;
    j["m"] = rep.M;
    j["l"] = rep.L;
    j["write_component"] = rep.write_component;
    j["read_component"] = rep.read_component;
    return j.dump();
}

std::string io_counts_to_json(const IoCounts& c) {
    return json{{"reads", c.reads}, {"writes", c.writes}, {"total", c.total}}.dump();
}

}  // namespace dagvisit
