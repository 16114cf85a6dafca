#pragma once

#include <iosfwd>
#include <string>

#include "dagvisit/bounds.hpp"
#include "dagvisit/machine.hpp"

namespace dagvisit {

// Graph format: {"n": int, "edges": [[u,v],...], "meta": {...}}.
std::string graph_to_json(const GeneratedDag& g);
GeneratedDag graph_from_json(const std::string& text);

std::string to_dot(const GeneratedDag& g);

// Explicit rules: {"kind": "...", ...}; explicit tables keyed by vertex id.
std::string rule_to_json(const Dag& d, const VisitRule& r);
VisitRule rule_from_json(const Dag& d, const std::string& text);
/// Parses CLI rule strings: top | singleton | blocked:s=K | file paths.
VisitRule rule_from_string(const GeneratedDag& g, const std::string& text);

std::string visit_to_json(const VisitSequence& s);
VisitSequence visit_from_json(const Dag& d, const std::string& text);

// Traces: JSON lines, {"op":"compute|read|write","v":id}; header line holds M.
std::string trace_to_jsonl(const IoComputation& c);
IoComputation trace_from_jsonl(std::istream& in);

std::string built_visit_to_json(const BuiltVisit& v);
std::string bound_report_to_json(const BoundReport& rep);
std::string io_counts_to_json(const IoCounts& c);

}  // namespace dagvisit
