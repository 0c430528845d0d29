#pragma once

#include "spinnet/scalar.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spinnet {

using json = nlohmann::json;

struct Vertex {
    std::string id;
    std::array<int, 3> half;  // half-edge indices in clockwise order
};

struct Edge {
    std::string id;
    int left, right;  // half-edge indices
};

// Angle k at a vertex sits between slots k and (k+1)%3.
struct Angle {
    int vertex;
    int first, second;  // half-edges, `first` earlier in the vertex listing
    int opposite;       // the third half-edge
};

// Trivalent graph together with its planar presentation.
class Graph {
public:
    std::string name;
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<std::string> half_ids;
    std::vector<std::pair<int, int>> crossings;  // edge indices

    // Validates the invariants and fills the derived tables.
    void finalize();

    int N() const { return static_cast<int>(vertices.size()) / 2; }
    int num_half() const { return static_cast<int>(half_ids.size()); }

    int edge_of(int h) const { return half_edge_[h]; }
    int vertex_of(int h) const { return half_vertex_[h]; }
    int slot_of(int h) const { return half_slot_[h]; }
    int partner(int h) const;
    bool is_left(int h) const { return edges[half_edge_[h]].left == h; }
    const std::vector<Angle>& angles() const { return angles_; }

    int edge_index(const std::string& id) const;
    int half_index(const std::string& id) const;
    int vertex_index(const std::string& id) const;

    // Half-edge indices in presentation order (vertex by vertex, slot by slot).
    std::vector<int> presentation_order() const;

private:
    std::vector<int> half_edge_, half_vertex_, half_slot_;
    std::vector<Angle> angles_;
    std::map<std::string, int> edge_ix_, half_ix_, vertex_ix_;
};

using Coloring = std::vector<int>;          // per edge
using InternalColoring = std::vector<int>;  // per angle

Graph graph_from_json(const json& j);
json graph_to_json(const Graph& g);
Graph load_graph(const std::string& path);

Coloring coloring_from_json(const Graph& g, const json& j);
json coloring_to_json(const Graph& g, const Coloring& c);

bool is_admissible(const Graph& g, const Coloring& c);
InternalColoring internal_coloring(const Graph& g, const Coloring& c);
int crossing_sign(const Graph& g, const Coloring& c);
// Edge colors recovered from angle colors at the left endpoint of each edge.
Coloring edge_colors_from_angles(const Graph& g, const InternalColoring& a);

// Every admissible coloring with all colors <= max_color, in lexicographic edge order.
std::vector<Coloring> admissible_colorings(const Graph& g, int max_color);

struct Mat2Q {
    CQ a, b, c, d;  // [[a, b], [c, d]]
    CQ det() const { return a * d - b * c; }
    Mat2Q inverse() const;  // for det = 1
    Mat2Q transpose() const { return {a, c, b, d}; }
    static Mat2Q identity() { return {CQ(1), CQ(0), CQ(0), CQ(1)}; }
};
Mat2Q operator*(const Mat2Q& x, const Mat2Q& y);
bool operator==(const Mat2Q& x, const Mat2Q& y);

using cd = std::complex<double>;
struct Mat2D {
    cd a, b, c, d;
    cd det() const { return a * d - b * c; }
    Mat2D inverse() const { return {d, -b, -c, a}; }
    static Mat2D identity() { return {1.0, 0.0, 0.0, 1.0}; }
};
Mat2D operator*(const Mat2D& x, const Mat2D& y);

enum class Regime { Trivial, Exact, Float };

// Per-half-edge SL2 matrices.  Trivial means every matrix is the identity.
struct Holonomy {
    Regime regime = Regime::Trivial;
    std::vector<Mat2Q> exact;
    std::vector<Mat2D> fl;

    static Holonomy trivial() { return {}; }
    bool is_trivial() const { return regime == Regime::Trivial; }
    Mat2Q exact_at(int h) const { return regime == Regime::Trivial ? Mat2Q::identity() : exact.at(h); }
    Mat2D float_at(int h) const;
};

Holonomy holonomy_from_json(const Graph& g, const json& j);
json holonomy_to_json(const Graph& g, const Holonomy& h);
Holonomy make_exact_holonomy(std::vector<Mat2Q> m);
Holonomy make_float_holonomy(std::vector<Mat2D> m);

}  // namespace spinnet
