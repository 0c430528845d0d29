#include "spinnet/graph.hpp"

#include "spinnet/errors.hpp"

#include <fstream>
#include <functional>
#include <set>

namespace spinnet {

namespace {

const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing key '" + key + "'");
    return j.at(key);
}

std::string need_str(const json& j, const std::string& where) {
    if (!j.is_string()) throw InputError(where + ": expected a string");
    return j.get<std::string>();
}

}  // namespace

void Graph::finalize() {
    const int nh = num_half();
    if (vertices.empty()) throw InputError("graph has no vertices");
    if (vertices.size() % 2 != 0) throw InputError("number of vertices must be even");
    if (2 * static_cast<int>(edges.size()) != 3 * static_cast<int>(vertices.size()) || nh != 2 * static_cast<int>(edges.size()))
        throw InputError("counts violate 3|V| = 2|E| = |H|");

    half_edge_.assign(nh, -1);
    half_vertex_.assign(nh, -1);
    half_slot_.assign(nh, -1);
    edge_ix_.clear();
    vertex_ix_.clear();
    half_ix_.clear();
    for (int h = 0; h < nh; ++h)
        if (!half_ix_.emplace(half_ids[h], h).second) throw InputError("duplicate half-edge id '" + half_ids[h] + "'");

    for (int v = 0; v < static_cast<int>(vertices.size()); ++v) {
        if (!vertex_ix_.emplace(vertices[v].id, v).second) throw InputError("duplicate vertex id '" + vertices[v].id + "'");
        for (int s = 0; s < 3; ++s) {
            int h = vertices[v].half[s];
            if (half_vertex_[h] != -1) throw InputError("half-edge '" + half_ids[h] + "' used by two vertex slots");
            half_vertex_[h] = v;
            half_slot_[h] = s;
        }
    }
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        if (!edge_ix_.emplace(edges[e].id, e).second) throw InputError("duplicate edge id '" + edges[e].id + "'");
        for (int h : {edges[e].left, edges[e].right}) {
            if (half_edge_[h] != -1) throw InputError("half-edge '" + half_ids[h] + "' used by two edges");
            half_edge_[h] = e;
        }
        if (edges[e].left == edges[e].right) throw InputError("edge '" + edges[e].id + "' uses one half-edge twice");
    }
    for (int h = 0; h < nh; ++h)
        if (half_edge_[h] == -1 || half_vertex_[h] == -1) throw InputError("half-edge '" + half_ids[h] + "' is dangling");

    for (auto& e : edges) {
        int vl = half_vertex_[e.left], vr = half_vertex_[e.right];
        bool ok = vl < vr || (vl == vr && half_slot_[e.left] < half_slot_[e.right]);
        if (!ok) throw InputError("edge '" + e.id + "': left half-edge must sit at the earlier vertex");
    }

    // connectivity
    std::vector<int> comp(vertices.size(), -1);
    std::vector<int> stack{0};
    comp[0] = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int h : vertices[v].half) {
            int w = half_vertex_[partner(h)];
            if (comp[w] == -1) {
                comp[w] = 0;
                stack.push_back(w);
            }
        }
    }
    for (int c : comp)
        if (c == -1) throw InputError("graph is not connected");

    for (auto& [a, b] : crossings) {
        if (a == b) throw InputError("an edge cannot cross itself");
        if (a > b) std::swap(a, b);
    }

    angles_.clear();
    for (int v = 0; v < static_cast<int>(vertices.size()); ++v)
        for (int k = 0; k < 3; ++k) {
            int s1 = k, s2 = (k + 1) % 3;
            if (s1 > s2) std::swap(s1, s2);
            angles_.push_back({v, vertices[v].half[s1], vertices[v].half[s2], vertices[v].half[3 - s1 - s2]});
        }
}

int Graph::partner(int h) const {
    const Edge& e = edges[half_edge_[h]];
    return e.left == h ? e.right : e.left;
}

int Graph::edge_index(const std::string& id) const {
    auto it = edge_ix_.find(id);
    if (it == edge_ix_.end()) throw InputError("unknown edge '" + id + "'");
    return it->second;
}

int Graph::half_index(const std::string& id) const {
    auto it = half_ix_.find(id);
    if (it == half_ix_.end()) throw InputError("unknown half-edge '" + id + "'");
    return it->second;
}

int Graph::vertex_index(const std::string& id) const {
    auto it = vertex_ix_.find(id);
    if (it == vertex_ix_.end()) throw InputError("unknown vertex '" + id + "'");
    return it->second;
}

std::vector<int> Graph::presentation_order() const {
    std::vector<int> out;
    for (auto& v : vertices)
        for (int h : v.half) out.push_back(h);
    return out;
}

Graph graph_from_json(const json& j) {
    Graph g;
    if (j.contains("name")) g.name = need_str(j.at("name"), "name");
    std::map<std::string, int> hix;
    auto half = [&](const json& x, const std::string& where) {
        std::string id = need_str(x, where);
        auto [it, fresh] = hix.emplace(id, static_cast<int>(g.half_ids.size()));
        if (fresh) g.half_ids.push_back(id);
        return it->second;
    };
    const json& vs = need(j, "vertices", "graph");
    if (!vs.is_array()) throw InputError("vertices: expected an array");
    for (size_t k = 0; k < vs.size(); ++k) {
        std::string where = "vertices[" + std::to_string(k) + "]";
        Vertex v;
        v.id = need_str(need(vs[k], "id", where), where + ".id");
        const json& hs = need(vs[k], "halfedges", where);
        if (!hs.is_array() || hs.size() != 3) throw InputError(where + ".halfedges: expected three half-edges");
        for (int s = 0; s < 3; ++s) v.half[s] = half(hs[s], where + ".halfedges");
        g.vertices.push_back(v);
    }
    const int nh_vertices = static_cast<int>(g.half_ids.size());
    const json& es = need(j, "edges", "graph");
    if (!es.is_array()) throw InputError("edges: expected an array");
    for (size_t k = 0; k < es.size(); ++k) {
        std::string where = "edges[" + std::to_string(k) + "]";
        Edge e;
        e.id = need_str(need(es[k], "id", where), where + ".id");
        e.left = half(need(es[k], "left", where), where + ".left");
        e.right = half(need(es[k], "right", where), where + ".right");
        g.edges.push_back(e);
    }
    if (static_cast<int>(g.half_ids.size()) != nh_vertices) throw InputError("edges reference half-edges that no vertex owns");
    std::map<std::string, int> eix;
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) eix[g.edges[e].id] = e;
    if (j.contains("crossings")) {
        const json& cs = j.at("crossings");
        if (!cs.is_array()) throw InputError("crossings: expected an array");
        for (size_t k = 0; k < cs.size(); ++k) {
            std::string where = "crossings[" + std::to_string(k) + "]";
            if (!cs[k].is_array() || cs[k].size() != 2) throw InputError(where + ": expected a pair of edge ids");
            int a[2];
            for (int t = 0; t < 2; ++t) {
                auto it = eix.find(need_str(cs[k][t], where));
                if (it == eix.end()) throw InputError(where + ": unknown edge '" + cs[k][t].get<std::string>() + "'");
                a[t] = it->second;
            }
            g.crossings.emplace_back(a[0], a[1]);
        }
    }
    g.finalize();
    return g;
}

json graph_to_json(const Graph& g) {
    json j;
    j["name"] = g.name;
    j["vertices"] = json::array();
    for (auto& v : g.vertices)
        j["vertices"].push_back({{"id", v.id}, {"halfedges", {g.half_ids[v.half[0]], g.half_ids[v.half[1]], g.half_ids[v.half[2]]}}});
    j["edges"] = json::array();
    for (auto& e : g.edges) j["edges"].push_back({{"id", e.id}, {"left", g.half_ids[e.left]}, {"right", g.half_ids[e.right]}});
    j["crossings"] = json::array();
    for (auto [a, b] : g.crossings) j["crossings"].push_back({g.edges[a].id, g.edges[b].id});
    return j;
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    return graph_from_json(j);
}

Coloring coloring_from_json(const Graph& g, const json& j) {
    if (!j.is_object()) throw InputError("coloring: expected an object {edge-id: int}");
    Coloring c(g.edges.size(), -1);
    for (auto& [k, v] : j.items()) {
        int e = g.edge_index(k);
        if (!v.is_number_integer() || v.get<long long>() < 0) throw InputError("coloring." + k + ": expected a non-negative integer");
        c[e] = v.get<int>();
    }
    for (size_t e = 0; e < c.size(); ++e)
        if (c[e] < 0) throw InputError("coloring: missing color for edge '" + g.edges[e].id + "'");
    return c;
}

json coloring_to_json(const Graph& g, const Coloring& c) {
    json j = json::object();
    for (size_t e = 0; e < c.size(); ++e) j[g.edges[e].id] = c[e];
    return j;
}

bool is_admissible(const Graph& g, const Coloring& c) {
    if (c.size() != g.edges.size()) throw InputError("coloring does not cover every edge");
    for (auto& v : g.vertices) {
        int a = c[g.edge_of(v.half[0])], b = c[g.edge_of(v.half[1])], d = c[g.edge_of(v.half[2])];
        if (a < 0 || b < 0 || d < 0) throw InputError("negative color");
        if ((a + b + d) % 2 != 0) return false;
        if (a > b + d || b > a + d || d > a + b) return false;
    }
    return true;
}

InternalColoring internal_coloring(const Graph& g, const Coloring& c) {
    if (!is_admissible(g, c)) throw AdmissibilityError("coloring is not admissible");
    InternalColoring out;
    out.reserve(g.angles().size());
    for (auto& a : g.angles())
        out.push_back((c[g.edge_of(a.first)] + c[g.edge_of(a.second)] - c[g.edge_of(a.opposite)]) / 2);
    return out;
}

Coloring edge_colors_from_angles(const Graph& g, const InternalColoring& a) {
    Coloring c(g.edges.size(), 0);
    const auto& an = g.angles();
    for (size_t e = 0; e < g.edges.size(); ++e) {
        int h = g.edges[e].left;
        for (size_t k = 0; k < an.size(); ++k)
            if (an[k].first == h || an[k].second == h) c[e] += a[k];
    }
    return c;
}

int crossing_sign(const Graph& g, const Coloring& c) {
    long long s = 0;
    for (auto [a, b] : g.crossings) s += static_cast<long long>(c[a]) * c[b];
    return s % 2 == 0 ? 1 : -1;
}

std::vector<Coloring> admissible_colorings(const Graph& g, int max_color) {
    std::vector<Coloring> out;
    const int ne = static_cast<int>(g.edges.size());
    Coloring c(ne, 0);
    // vertices become checkable once all their edges are assigned
    std::vector<int> last(g.vertices.size(), 0);
    for (size_t v = 0; v < g.vertices.size(); ++v)
        for (int h : g.vertices[v].half) last[v] = std::max(last[v], g.edge_of(h));
    std::vector<std::vector<int>> closing(ne);
    for (size_t v = 0; v < g.vertices.size(); ++v) closing[last[v]].push_back(static_cast<int>(v));
    auto vertex_ok = [&](int v) {
        const auto& hs = g.vertices[v].half;
        int a = c[g.edge_of(hs[0])], b = c[g.edge_of(hs[1])], d = c[g.edge_of(hs[2])];
        return (a + b + d) % 2 == 0 && a <= b + d && b <= a + d && d <= a + b;
    };
    std::function<void(int)> rec = [&](int e) {
        if (e == ne) {
            out.push_back(c);
            return;
        }
        for (int x = 0; x <= max_color; ++x) {
            c[e] = x;
            bool ok = true;
            for (int v : closing[e])
                if (!vertex_ok(v)) {
                    ok = false;
                    break;
                }
            if (ok) rec(e + 1);
        }
        c[e] = 0;
    };
    rec(0);
    return out;
}

Mat2Q Mat2Q::inverse() const { return {d, -b, -c, a}; }

Mat2Q operator*(const Mat2Q& x, const Mat2Q& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

bool operator==(const Mat2Q& x, const Mat2Q& y) { return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d; }

Mat2D operator*(const Mat2D& x, const Mat2D& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2D Holonomy::float_at(int h) const {
    switch (regime) {
        case Regime::Trivial: return Mat2D::identity();
        case Regime::Float: return fl.at(h);
        case Regime::Exact: {
            const Mat2Q& m = exact.at(h);
            return {m.a.to_complex(), m.b.to_complex(), m.c.to_complex(), m.d.to_complex()};
        }
    }
    return Mat2D::identity();
}

Holonomy make_exact_holonomy(std::vector<Mat2Q> m) {
    for (auto& x : m)
        if (!x.det().is_one()) throw InputError("holonomy matrix with determinant " + to_string(x.det()));
    Holonomy h;
    h.regime = Regime::Exact;
    h.exact = std::move(m);
    return h;
}

Holonomy make_float_holonomy(std::vector<Mat2D> m) {
    for (auto& x : m)
        if (std::abs(x.det() - 1.0) > 1e-12) throw InputError("holonomy matrix determinant differs from 1 by more than 1e-12");
    Holonomy h;
    h.regime = Regime::Float;
    h.fl = std::move(m);
    return h;
}

Holonomy holonomy_from_json(const Graph& g, const json& j) {
    if (!j.is_object()) throw InputError("holonomy: expected an object {halfedge-id: [[s,s],[s,s]]}");
    bool any_float = false, any_exact = false;
    for (auto& [k, m] : j.items()) {
        std::string where = "holonomy." + k;
        if (!m.is_array() || m.size() != 2 || !m[0].is_array() || !m[1].is_array() || m[0].size() != 2 || m[1].size() != 2)
            throw InputError(where + ": expected a 2x2 array");
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                const json& s = m[r][c];
                if (s.is_number()) {
                    if (s.is_number_integer()) continue;
                    any_float = true;
                } else if (s.is_array() && s.size() == 2 && s[0].is_number() && s[1].is_number()) {
                    any_float = true;
                } else if (s.is_string()) {
                    any_exact = true;
                } else {
                    throw InputError(where + ": scalar must be a number or a string");
                }
            }
    }
    if (any_float && any_exact) throw InputError("holonomy mixes exact strings and floating-point numbers");
    const int nh = g.num_half();
    if (any_float) {
        std::vector<Mat2D> m(nh, Mat2D::identity());
        for (auto& [k, x] : j.items()) {
            int h = g.half_index(k);
            auto f = [](const json& s) { return s.is_array() ? cd(s[0].get<double>(), s[1].get<double>()) : cd(s.get<double>(), 0.0); };
            m[h] = {f(x[0][0]), f(x[0][1]), f(x[1][0]), f(x[1][1])};
        }
        return make_float_holonomy(std::move(m));
    }
    std::vector<Mat2Q> m(nh, Mat2Q::identity());
    auto scal = [](const json& s) { return s.is_string() ? parse_cq(s.get<std::string>()) : CQ(Rational(s.get<long>())); };
    for (auto& [k, x] : j.items()) {
        int h = g.half_index(k);
        try {
            m[h] = {scal(x[0][0]), scal(x[0][1]), scal(x[1][0]), scal(x[1][1])};
        } catch (const InputError& e) {
            throw InputError("holonomy." + k + ": " + e.what());
        }
    }
    return make_exact_holonomy(std::move(m));
}

json holonomy_to_json(const Graph& g, const Holonomy& h) {
    json j = json::object();
    for (int k = 0; k < g.num_half(); ++k) {
        if (h.regime == Regime::Float) {
            auto m = h.fl[k];
            auto f = [](cd z) { return z.imag() == 0 ? json(z.real()) : json::array({z.real(), z.imag()}); };
            j[g.half_ids[k]] = {{f(m.a), f(m.b)}, {f(m.c), f(m.d)}};
        } else {
            Mat2Q m = h.exact_at(k);
            j[g.half_ids[k]] = {{to_string(m.a), to_string(m.b)}, {to_string(m.c), to_string(m.d)}};
        }
    }
    return j;
}

}  // namespace spinnet
