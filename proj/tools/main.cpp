// Command-line front end: generators, visit builders/checkers, exact oracles,
// machine simulators, bound evaluators, and the verification suites.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dagvisit/bruteforce.hpp"
#include "dagvisit/builders.hpp"
#include "dagvisit/json_io.hpp"
#include "dagvisit/oracles.hpp"
#include "dagvisit/random_dag.hpp"
#include "dagvisit/verify.hpp"

using namespace dagvisit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitLimit = 3;
constexpr int kExitIo = 4;

struct GraphArgs {
    std::string family;
    std::string graph_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--family", family, "family spec, e.g. diamond:q=2,b=32");
        cmd->add_option("--graph", graph_path, "graph JSON file ('-' for stdin)");
    }
    GeneratedDag load() const {
        if (!family.empty()) return generate(parse_family(family));
        if (graph_path.empty() || graph_path == "-") {
            std::stringstream buffer;
            buffer << std::cin.rdbuf();
            return graph_from_json(buffer.str());
        }
        std::ifstream in(graph_path);
        if (!in) throw std::ios_base::failure("cannot open " + graph_path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return graph_from_json(buffer.str());
    }
};

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::ios_base::failure("cannot open " + out_path);
    out << text;
}

VertexSet parse_vertex_list(const std::string& text) {
    VertexList raw;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) raw.push_back(std::stoi(item));
    return vset::from_unsorted(raw);
}

OracleLimits parse_limits(const std::string& text) {
    OracleLimits lim = OracleLimits::from_env();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) continue;
        std::string key = item.substr(0, eq);
        int value = std::stoi(item.substr(eq + 1));
        if (key == "subset") lim.max_n_subset_dp = value;
        if (key == "pebble") lim.max_n_pebbling = value;
        if (key == "viopt") lim.max_n_visit_partition = value;
        if (key == "ms") lim.time_budget_ms = value;
    }
    return lim;
}

std::string read_all(const std::string& path) {
    if (path.empty() || path == "-") {
        std::stringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

BoundMetric parse_metric(const std::string& text) {
    if (text == "write") return BoundMetric::Write;
    if (text == "read") return BoundMetric::Read;
    if (text == "total") return BoundMetric::Total;
    throw dag_error("unknown metric '" + text + "'");
}

ModelVariant parse_variant(const std::string& text) {
    if (text == "standard") return ModelVariant::Standard;
    if (text == "free-input") return ModelVariant::FreeInput;
    if (text == "no-recompute") return ModelVariant::NoRecompute;
    throw dag_error("unknown variant '" + text + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DAG visit scheduling, pebbling, and I/O lower-bound toolkit"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "output file (default stdout)");
    std::string limits_text;
    app.add_option("--limits", limits_text,
                   "oracle limits, e.g. subset=22,pebble=10,viopt=12,ms=60000");
    unsigned seed = 1;
    app.add_option("--seed", seed, "base seed for randomized commands");

    // ------------------------------------------------------------------ gen
    auto* gen = app.add_subcommand("gen", "generate a family instance");
    std::string gen_family;
    gen->add_option("--family", gen_family, "family spec")->required();
    std::string gen_format = "json";
    gen->add_option("--format", gen_format, "json | dot");
    gen->add_flag_callback("--dot", [&] { gen_format = "dot"; }, "shorthand for --format dot");

    // ---------------------------------------------------------------- visit
    auto* visit = app.add_subcommand("visit", "build or check visits");
    visit->require_subcommand(1);
    auto* vbuild = visit->add_subcommand("build", "run a constructive visit algorithm");
    GraphArgs vb_graph;
    vb_graph.attach(vbuild);
    std::string vb_algo = "singleton";
    vbuild->add_option("--algo", vb_algo, "depth | singleton | topo | diamond-blocked");
    std::string vb_rule = "singleton";
    vbuild->add_option("--rule", vb_rule, "rule for --algo depth (top|singleton|blocked:s=K)");
    int vb_m = 2;
    vbuild->add_option("--m", vb_m, "cache size for --algo diamond-blocked");

    auto* vcheck = visit->add_subcommand("check", "validate a (graph, rule, sequence) triple");
    GraphArgs vc_graph;
    vc_graph.attach(vcheck);
    std::string vc_rule = "singleton";
    vcheck->add_option("--rule", vc_rule, "top | singleton | blocked:s=K");
    std::string vc_seq;
    vcheck->add_option("--sequence", vc_seq, "visit JSON array (file or '-')")->required();

    // --------------------------------------------------------------- oracle
    auto* oracle = app.add_subcommand("oracle", "exact solvers with witnesses");
    oracle->require_subcommand(1);
    auto* oboundary = oracle->add_subcommand("boundary", "exact boundary complexity");
    GraphArgs ob_graph;
    ob_graph.attach(oboundary);
    std::string ob_rule = "singleton";
    oboundary->add_option("--rule", ob_rule, "top | singleton | blocked:s=K");
    auto* opebble = oracle->add_subcommand("pebbling", "exact pebbling number");
    GraphArgs op_graph;
    op_graph.attach(opebble);
    auto* odom = oracle->add_subcommand("dominator", "minimum dominator of a set");
    GraphArgs od_graph;
    od_graph.attach(odom);
    std::string od_set;
    odom->add_option("--set", od_set, "comma-separated vertex ids")->required();
    auto* opost = oracle->add_subcommand("postdominator", "minimum post-dominator of a set");
    GraphArgs opd_graph;
    opd_graph.attach(opost);
    std::string opd_set;
    opost->add_option("--set", opd_set, "comma-separated vertex ids")->required();
    auto* ospart = oracle->add_subcommand("spartition", "minimum S-partition size");
    GraphArgs os_graph;
    os_graph.attach(ospart);
    int os_s = 2;
    ospart->add_option("--s", os_s, "set-size budget S")->required();
    auto* oflows = oracle->add_subcommand("flows", "max vertex-disjoint paths");
    GraphArgs of_graph;
    of_graph.attach(oflows);
    std::string of_sources, of_sinks, of_shared;
    oflows->add_option("--sources", of_sources)->required();
    oflows->add_option("--sinks", of_sinks)->required();
    oflows->add_option("--shared", of_shared, "vertices paths may share");
    auto* oviopt = oracle->add_subcommand("viopt", "exact visit-partition bound");
    GraphArgs ov_graph;
    ov_graph.attach(oviopt);
    std::string ov_rule = "singleton";
    oviopt->add_option("--rule", ov_rule, "rule on reverse(d)");
    int ov_m = 1;
    oviopt->add_option("--m", ov_m, "cache size");
    std::string ov_metric = "write";
    oviopt->add_option("--metric", ov_metric, "write | read | total");
    bool ov_norecompute = false;
    oviopt->add_flag("--no-recompute", ov_norecompute, "restrict to topological visits");

    // --------------------------------------------------------------- bounds
    auto* bounds = app.add_subcommand("bounds", "visit-partition bound evaluators");
    bounds->require_subcommand(1);
    auto* bpart = bounds->add_subcommand("partition", "best partition for a visit");
    GraphArgs bp_graph;
    bp_graph.attach(bpart);
    std::string bp_rule = "singleton";
    bpart->add_option("--rule", bp_rule, "rule on reverse(d)");
    std::string bp_visit;
    bpart->add_option("--visit", bp_visit, "visit of reverse(d) as JSON (default: built)");
    int bp_m = 1;
    bpart->add_option("--m", bp_m, "cache size");
    int bp_l = 1;
    bpart->add_option("--l", bp_l, "words per I/O transfer");
    std::string bp_metric = "total";
    bpart->add_option("--metric", bp_metric, "write | read | total");
    std::string bp_variant = "standard";
    bpart->add_option("--variant", bp_variant, "standard | free-input | no-recompute");
    auto* bdiamond = bounds->add_subcommand("diamond", "closed-form diamond lower bound");
    int bd_q = 2, bd_b = 8, bd_m = 2, bd_l = 1;
    bdiamond->add_option("--q", bd_q)->required();
    bdiamond->add_option("--b", bd_b)->required();
    bdiamond->add_option("--m", bd_m)->required();
    bdiamond->add_option("--l", bd_l);
    std::string bd_format = "json";
    bdiamond->add_option("--format", bd_format, "json | csv (family,params,lower,upper,ratio)");
    auto* bhk = bounds->add_subcommand("hongkung", "S-partition comparison bound");
    GraphArgs bh_graph;
    bh_graph.attach(bhk);
    int bh_m = 1;
    bhk->add_option("--m", bh_m, "cache size");
    auto* bcat = bounds->add_subcommand("catalog", "closed-form catalog for a family");
    std::string bc_family;
    bcat->add_option("--family", bc_family)->required();
    int bc_m = 2, bc_l = 1;
    bcat->add_option("--m", bc_m);
    bcat->add_option("--l", bc_l);
    std::string bc_format = "json";
    bcat->add_option("--format", bc_format, "json | csv");
    auto* biocount = bounds->add_subcommand("io-count", "count a JSONL trace from stdin");

    // ------------------------------------------------------------- simulate
    auto* simulate = app.add_subcommand("simulate", "machine simulators");
    simulate->require_subcommand(1);
    auto* sastar = simulate->add_subcommand("astar", "blocked diamond evaluation");
    int sa_q = 2, sa_b = 8, sa_m = 2;
    sastar->add_option("--q", sa_q)->required();
    sastar->add_option("--b", sa_b)->required();
    sastar->add_option("--m", sa_m)->required();
    auto* sgreedy = simulate->add_subcommand("greedy", "explicit-cache evaluation");
    GraphArgs sg_graph;
    sg_graph.attach(sgreedy);
    int sg_m = 2;
    sgreedy->add_option("--m", sg_m)->required();
    std::string sg_policy = "furthest";
    sgreedy->add_option("--policy", sg_policy, "furthest | lru");
    std::string sg_order;
    sgreedy->add_option("--order", sg_order, "topological order JSON (default: id order)");
    auto* svalidate = simulate->add_subcommand("validate", "validate a JSONL trace from stdin");
    GraphArgs sv_graph;
    sv_graph.attach(svalidate);

    // --------------------------------------------------------------- verify
    auto* verify = app.add_subcommand("verify", "acceptance suites");
    std::string verify_suite = "all";
    verify->add_option("suite", verify_suite, "diamond-io | hong-kung | universal-bounds | "
                                              "tightness | pebbling | converters | oracles | all");
    int verify_max_n = 400;
    verify->add_option("--n", verify_max_n, "max random graph size");
    int verify_seeds = 500;
    verify->add_option("--seeds", verify_seeds, "number of seeded instances");
    std::string verify_format = "csv";
    verify->add_option("--format", verify_format, "csv | json");

    CLI11_PARSE(app, argc, argv);

    try {
        OracleLimits limits = parse_limits(limits_text);
        if (gen->parsed()) {
            GeneratedDag g = generate(parse_family(gen_family));
            emit(out_path, gen_format == "dot" ? to_dot(g) : graph_to_json(g));
            return kExitOk;
        }
        if (vbuild->parsed()) {
            GeneratedDag g = vb_graph.load();
            if (vb_algo == "diamond-blocked") {
                BlockedVisit bv = build_diamond_blocked_visit(g, vb_m);
                emit(out_path, built_visit_to_json(bv.visit));
            } else if (vb_algo == "depth") {
                emit(out_path, built_visit_to_json(
                                   build_depth_visit(g.dag, rule_from_string(g, vb_rule))));
            } else if (vb_algo == "singleton") {
                emit(out_path, built_visit_to_json(build_singleton_visit(g.dag)));
            } else if (vb_algo == "topo") {
                emit(out_path, built_visit_to_json(build_topological_visit(g.dag)));
            } else {
                std::cerr << "unknown --algo " << vb_algo << "\n";
                return kExitBadInput;
            }
            return kExitOk;
        }
        if (vcheck->parsed()) {
            GeneratedDag g = vc_graph.load();
            VisitRule r = rule_from_string(g, vc_rule);
            VisitSequence seq = visit_from_json(g.dag, read_all(vc_seq));
            SequenceCheck check = is_r_sequence(g.dag, r, seq);
            std::ostringstream os;
            os << "{\"ok\":" << (check.ok ? "true" : "false");
            if (!check.ok) os << ",\"first_violation\":" << check.first_violation;
            if (check.ok && seq.complete(g.dag))
                os << ",\"boundary_complexity\":"
                   << boundary_complexity_of_sequence(g.dag, r, seq);
            os << "}";
            emit(out_path, os.str());
            return check.ok ? kExitOk : kExitCheckFailed;
        }
        if (oboundary->parsed()) {
            GeneratedDag g = ob_graph.load();
            auto res = exact_boundary_complexity(g.dag, rule_from_string(g, ob_rule), limits);
            std::ostringstream os;
            os << "{\"value\":" << res.value << ",\"witness\":" << visit_to_json(res.witness)
               << "}";
            emit(out_path, os.str());
            return kExitOk;
        }
        if (opebble->parsed()) {
            GeneratedDag g = op_graph.load();
            auto res = exact_pebbling_number(g.dag, limits);
            std::ostringstream os;
            os << "{\"number\":" << res.number << ",\"schedule\":[";
            for (size_t i = 0; i < res.witness.steps.size(); ++i) {
                const auto& st = res.witness.steps[i];
                os << (i ? "," : "") << "{\"op\":\""
                   << (st.op == PebbleOp::Place ? "place" : "remove") << "\",\"v\":" << st.v
                   << "}";
            }
            os << "]}";
            emit(out_path, os.str());
            return kExitOk;
        }
        if (odom->parsed() || opost->parsed()) {
            bool dom = odom->parsed();
            GeneratedDag g = dom ? od_graph.load() : opd_graph.load();
            VertexSet X = parse_vertex_list(dom ? od_set : opd_set);
            CutResult res = dom ? min_dominator(g.dag, X) : min_post_dominator(g.dag, X);
            std::ostringstream os;
            os << "{\"size\":" << res.size << ",\"witness\":[";
            for (size_t i = 0; i < res.witness.size(); ++i)
                os << (i ? "," : "") << res.witness[i];
            os << "]}";
            emit(out_path, os.str());
            return kExitOk;
        }
        if (ospart->parsed()) {
            GeneratedDag g = os_graph.load();
            std::ostringstream os;
            os << "{\"k\":" << min_s_partition_k(g.dag, os_s, limits) << "}";
            emit(out_path, os.str());
            return kExitOk;
        }
        if (oflows->parsed()) {
            GeneratedDag g = of_graph.load();
            PathSystem ps = max_disjoint_paths(g.dag, parse_vertex_list(of_sources),
                                               parse_vertex_list(of_sinks),
                                               parse_vertex_list(of_shared));
            std::ostringstream os;
            os << "{\"count\":" << ps.count << ",\"paths\":[";
            for (size_t i = 0; i < ps.paths.size(); ++i) {
                os << (i ? "," : "") << "[";
                for (size_t j = 0; j < ps.paths[i].size(); ++j)
                    os << (j ? "," : "") << ps.paths[i][j];
                os << "]";
            }
            os << "]}";
            emit(out_path, os.str());
            return kExitOk;
        }
        if (oviopt->parsed()) {
            GeneratedDag g = ov_graph.load();
            GeneratedDag rev = reversed(g);
            VisitRule r = rule_from_string(rev, ov_rule);
            long long value = exact_visit_partition_bound(g.dag, r, ov_m,
                                                          parse_metric(ov_metric), limits,
                                                          ov_norecompute);
            emit(out_path, "{\"value\":" + std::to_string(value) + "}");
            return kExitOk;
        }
        if (bpart->parsed()) {
            GeneratedDag g = bp_graph.load();
            GeneratedDag rev = reversed(g);
            VisitRule r = rule_from_string(rev, bp_rule);
            ModelVariant variant = parse_variant(bp_variant);
            VisitSequence v = bp_visit.empty()
                                  ? (variant == ModelVariant::NoRecompute
                                         ? build_topological_visit(rev.dag).sequence
                                         : build_depth_visit(rev.dag, r).sequence)
                                  : visit_from_json(rev.dag, read_all(bp_visit));
            if (variant == ModelVariant::NoRecompute &&
                !is_r_sequence(rev.dag, VisitRule::top(rev.dag), v).ok)
                throw dag_error("no-recompute bounds need a topological visit of reverse(d)");
            BestPartition wbp = best_partition(rev.dag, r, v, bp_m, BoundMetric::Write);
            BestPartition rbp = best_partition(rev.dag, r, v, bp_m, BoundMetric::Read);
            BoundReport rep = variant_bound(wbp.value, rbp.value,
                                            static_cast<int>(g.dag.inputs().size()),
                                            static_cast<int>(g.dag.outputs().size()), variant,
                                            parse_metric(bp_metric), bp_m, bp_l);
            emit(out_path, bound_report_to_json(rep));
            return kExitOk;
        }
        if (bdiamond->parsed()) {
            long long lower = diamond_lower_bound(bd_q, bd_b, bd_m, bd_l);
            if (bd_format == "csv") {
                std::ostringstream os;
                os << "family,params,lower,upper,ratio\n";
                long long upper = -1;
                if (bd_q == 2 && bd_m >= 2) {
                    long long bstar = (bd_m - 1) / (bd_q - 1) + 1;
                    long long per_side = (bd_b + bstar - 1) / bstar;
                    upper = 4LL * bd_m * per_side * per_side / bd_l;
                }
                os << "diamond,q=" << bd_q << " b=" << bd_b << " M=" << bd_m << " L=" << bd_l
                   << "," << lower << "," << (upper < 0 ? std::string("-") : std::to_string(upper))
                   << ",";
                if (upper >= 0 && lower > 0)
                    os << static_cast<double>(upper) / static_cast<double>(lower);
                else
                    os << "-";
                os << "\n";
                emit(out_path, os.str());
            } else {
                BoundReport rep;
                rep.metric = BoundMetric::Total;
                rep.M = bd_m;
                rep.L = bd_l;
                rep.value = lower;
                emit(out_path, bound_report_to_json(rep));
            }
            return kExitOk;
        }
        if (bhk->parsed()) {
            GeneratedDag g = bh_graph.load();
            HongKungResult hk = hong_kung_bound(g.dag, bh_m);
            std::ostringstream os;
            os << "{\"k\":" << hk.k << ",\"bound\":" << hk.bound
               << ",\"properties_ok\":" << (hk.properties_ok ? "true" : "false") << "}";
            emit(out_path, os.str());
            return kExitOk;
        }
        if (bcat->parsed()) {
            auto entries = closed_form_catalog(parse_family(bc_family), bc_m, bc_l);
            std::ostringstream os;
            if (bc_format == "csv") {
                os << "family,name,value\n";
                for (const auto& e : entries)
                    os << bc_family << "," << e.name << "," << e.value << "\n";
            } else {
                os << "{";
                for (size_t i = 0; i < entries.size(); ++i)
                    os << (i ? "," : "") << "\"" << entries[i].name << "\":" << entries[i].value;
                os << "}";
            }
            emit(out_path, os.str());
            return kExitOk;
        }
        if (biocount->parsed()) {
            IoComputation c = trace_from_jsonl(std::cin);
            emit(out_path, io_counts_to_json(io_counts(c)));
            return kExitOk;
        }
        if (sastar->parsed()) {
            IoComputation c = run_diamond_astar(sa_q, sa_b, sa_m);
            emit(out_path, trace_to_jsonl(c));
            return kExitOk;
        }
        if (sgreedy->parsed()) {
            GeneratedDag g = sg_graph.load();
            VisitSequence order = sg_order.empty()
                                      ? VisitSequence::of(g.dag, topological_order(g.dag))
                                      : visit_from_json(g.dag, read_all(sg_order));
            EvictionPolicy policy =
                sg_policy == "lru" ? EvictionPolicy::Lru : EvictionPolicy::FurthestNextUse;
            emit(out_path, trace_to_jsonl(greedy_computation(g.dag, order, sg_m, policy)));
            return kExitOk;
        }
        if (svalidate->parsed()) {
            GeneratedDag g = sv_graph.load();
            IoComputation c = trace_from_jsonl(std::cin);
            ComputationReport rep = validate_computation(g.dag, c);
            std::ostringstream os;
            os << "{\"ok\":" << (rep.ok ? "true" : "false") << ",\"peak_occupancy\":"
               << rep.peak_occupancy << ",\"violations\":[";
            for (size_t i = 0; i < rep.violations.size(); ++i) {
                const auto& v = rep.violations[i];
                os << (i ? "," : "") << "{\"kind\":\"" << v.kind << "\",\"step\":" << v.step
                   << ",\"v\":" << v.v << "}";
            }
            os << "]}";
            emit(out_path, os.str());
            return rep.ok ? kExitOk : kExitCheckFailed;
        }
        if (verify->parsed()) {
            VerifyOptions opts;
            opts.universal_count = verify_seeds;
            opts.universal_max_n = verify_max_n;
            opts.seed = static_cast<int>(seed);
            auto rows = run_suite(verify_suite, opts);
            if (verify_format == "json") {
                std::ostringstream os;
                os << "[";
                for (size_t i = 0; i < rows.size(); ++i) {
                    const auto& r = rows[i];
                    os << (i ? "," : "") << "{\"suite\":\"" << r.suite << "\",\"check\":\""
                       << r.check << "\",\"expected\":\"" << r.expected << "\",\"observed\":\""
                       << r.observed << "\",\"pass\":" << (r.pass ? "true" : "false") << "}";
                }
                os << "]";
                emit(out_path, os.str());
            } else {
                emit(out_path, rows_to_csv(rows));
            }
            return all_pass(rows) ? kExitOk : kExitCheckFailed;
        }
    } catch (const limit_error& e) {
        std::cerr << "limit: " << e.what() << "\n";
        return kExitLimit;
    } catch (const dag_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}
