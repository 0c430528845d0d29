#pragma once

#include "spinnet/graph.hpp"

#include <string>
#include <vector>

namespace spinnet {

// theta, tetrahedron, prism, tetrahedron_crossing
std::vector<std::string> bundled_graph_names();
Graph bundled_graph(const std::string& name);  // throws InputError for unknown names

}  // namespace spinnet
