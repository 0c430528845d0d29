#include "spinnet/bundled.hpp"

#include "spinnet/errors.hpp"

#include <utility>

namespace spinnet {

namespace {
const std::vector<std::pair<std::string, const char*>>& table() {
    static const std::vector<std::pair<std::string, const char*>> t = {
#include "bundled_graphs.inc"
    };
    return t;
}
}  // namespace

std::vector<std::string> bundled_graph_names() {
    std::vector<std::string> out;
    for (auto& [name, txt] : table()) out.push_back(name);
    return out;
}

Graph bundled_graph(const std::string& name) {
    for (auto& [n, txt] : table())
        if (n == name) return graph_from_json(json::parse(txt));
    throw InputError("unknown bundled graph '" + name + "'");
}

}  // namespace spinnet
