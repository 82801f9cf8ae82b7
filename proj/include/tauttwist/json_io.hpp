#pragma once

#include <json.hpp>

#include "tauttwist/registry.hpp"
#include "tauttwist/taut_class.hpp"

namespace tauttwist {

// All emitted JSON uses insertion order and exact "p/q" strings so that
// identical inputs produce identical bytes.
using Json = nlohmann::ordered_json;

Json graph_to_json(const StableGraph& g);
StableGraph graph_from_json(const Json& j);

Json term_to_json(const StableGraph& g, const Decoration& dec,
                  const VertexLabels& labels, const Rat& coeff);

Json class_to_json(const TautClass& t);
TautClass class_from_json(const Json& j);

Json class_to_json(const SymbolicClass& s);
SymbolicClass symbolic_class_from_json(const Json& j);

Json registry_to_json(const ClassRegistry& r);
ClassRegistry registry_from_json(const Json& j);

std::string dump(const Json& j);  // 2-space indent plus trailing newline

}  // namespace tauttwist
