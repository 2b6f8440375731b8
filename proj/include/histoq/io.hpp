#pragma once

#include <functional>
#include <string>

#include "histoq/classical_sim.hpp"
#include "histoq/constructions.hpp"
#include "histoq/extension_search.hpp"
#include "histoq/green_graph.hpp"
#include "histoq/noise_lab.hpp"

namespace histoq::io {

// Parse failures carry the offending field path (JSON-pointer style) or the
// byte position reported by the JSON parser.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what) {}
};

// Circuit files ("format": 1):
//   qubits | dim, initial (bitstring | {"index": k} | [[re,im],...] |
//   {"pseudopure": {"state": ..., "nu": x}}), stages ({"gate","targets"} or
//   {"matrix","targets"}), final ("computational" | list of basis vectors).
Circuit parse_circuit(const std::string& text);

// Family files ("format": 1): circuit (inline object or file path) plus
// insertions [{"stage": k, "basis": "computational" | "bell" |
// {"angles": [{"theta","phi"},...]} | [vectors]}].
using FileLoader = std::function<std::string(const std::string&)>;
HistoryFamily parse_family(const std::string& text, const FileLoader& loader = {});

std::string serialize_circuit(const Circuit& circuit);
std::string serialize_family(const HistoryFamily& family);

// Reports are emitted with stable key order and floats at 17 significant
// digits, so byte-identical output is reproducible across runs.
std::string serialize_report(const ConsistencyReport& report);
std::string serialize_report(const NoiseReport& report);
std::string serialize_report(const SumRuleReport& report);
std::string serialize_results(const std::vector<SearchResult>& results);
std::string serialize_profile(const std::vector<ProfileEntry>& entries);
std::string serialize_chain(const TransitionChain& chain);
std::string serialize_distribution(const Distribution& dist);

// Shared fragment explaining the two entropy units in emitted reports.
extern const char* const kEntropyUnitsNote;

}  // namespace histoq::io
