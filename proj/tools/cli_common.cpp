#include "cli.hpp"

#include "oracles/racah.hpp"
#include "spinnet/bundled.hpp"
#include "spinnet/errors.hpp"
#include "spinnet/evaluator.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cli {

using namespace spinnet;

namespace {

bool is_bundled(const std::string& n) {
    for (auto& b : bundled_graph_names())
        if (b == n) return true;
    return false;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(what + ": malformed JSON (" + e.what() + ")");
    }
}

}  // namespace

Graph resolve_graph(const std::string& arg) {
    if (std::filesystem::exists(arg)) return load_graph(arg);
    std::string name = std::filesystem::path(arg).stem().string();
    if (name == "3-prism") name = "prism";
    if (is_bundled(name)) return bundled_graph(name);
    throw InputError("graph '" + arg + "' is neither a file nor a bundled graph");
}

Coloring resolve_coloring(const Graph& g, const std::string& arg) {
    if (arg.empty()) throw InputError("a coloring is required");
    if (std::filesystem::exists(arg)) return coloring_from_json(g, parse_json(read_file(arg), arg));
    if (arg.front() == '{' || arg.front() == '[') return coloring_from_json(g, parse_json(arg, "coloring"));
    Coloring c(g.edges.size(), -1);
    std::stringstream ss(arg);
    std::string item;
    size_t pos = 0;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        int e;
        std::string val;
        if (eq == std::string::npos) {
            if (pos >= c.size()) throw InputError("coloring: more values than edges");
            e = static_cast<int>(pos++);
            val = item;
        } else {
            e = g.edge_index(item.substr(0, eq));
            val = item.substr(eq + 1);
        }
        try {
            size_t used = 0;
            c[e] = std::stoi(val, &used);
            if (used != val.size() || c[e] < 0) throw std::invalid_argument(val);
        } catch (const std::logic_error&) {
            throw InputError("coloring: '" + val + "' is not a non-negative integer");
        }
    }
    for (size_t e = 0; e < c.size(); ++e)
        if (c[e] < 0) throw InputError("coloring: edge '" + g.edges[e].id + "' has no color");
    return c;
}

Holonomy resolve_holonomy(const Graph& g, const std::string& arg) {
    if (arg.empty()) return Holonomy::trivial();
    if (std::filesystem::exists(arg)) return holonomy_from_json(g, parse_json(read_file(arg), arg));
    return holonomy_from_json(g, parse_json(arg, "holonomy"));
}

json cq_json(const CQ& z) { return {{"re", to_string(z.re)}, {"im", to_string(z.im)}}; }

json series_json(const MPoly& p) { return poly_to_json(p); }

std::string digest(const std::string& text) {
    // FNV-1a, enough to tell inputs apart in a report
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json exact_bracket(const Graph& g, const Coloring& c) {
    if (!is_admissible(g, c)) return "0";
    int maxc = 0;
    for (int x : c) maxc = std::max(maxc, x);
    bool tetrahedral = g.vertices.size() == 4;
    if (tetrahedral) {
        try {
            Rational r = oracle::racah(g, c);
            return to_string(Rational(r * r / vertex_theta_product(g, c)));
        } catch (const std::invalid_argument&) {
        }
    }
    if (g.vertices.size() <= 2 || maxc <= 12) return to_string(bracket_square(g, c));
    return nullptr;
}

}  // namespace cli
