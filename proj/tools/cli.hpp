#pragma once

#include "spinnet/graph.hpp"
#include "spinnet/poly.hpp"

#include <string>
#include <vector>

namespace cli {

using spinnet::json;

// Bundled name ("theta", "tetrahedron", ...), a bundled name with .json, or a path.
spinnet::Graph resolve_graph(const std::string& arg);
// A JSON file, inline JSON, "e1=2,e2=3,..." or "2,3,3" in edge order.
spinnet::Coloring resolve_coloring(const spinnet::Graph& g, const std::string& arg);
// A JSON file or inline JSON; empty means trivial.
spinnet::Holonomy resolve_holonomy(const spinnet::Graph& g, const std::string& arg);

json cq_json(const spinnet::CQ& z);
json series_json(const spinnet::MPoly& p);
std::string digest(const std::string& text);

// Exact [Gamma, c] when affordable: the tetrahedron through the single-sum formula,
// small inputs through the evaluator.  Null otherwise.
json exact_bracket(const spinnet::Graph& g, const spinnet::Coloring& c);

int run_selftest(bool verbose);

}  // namespace cli
