#pragma once

#include "spinnet/graph.hpp"
#include "spinnet/poly.hpp"

#include <vector>

namespace spinnet {

// Namespace z_h, w_h for every half-edge, in presentation order: z_h has index 2h, w_h index 2h+1.
SpacePtr zw_space(const Graph& g);

// Holonomy-substituted normalized vertex tensor in the z/w namespace.
MPoly vertex_polynomial(const Graph& g, int v, const Coloring& c, const Holonomy& psi);

// <Gamma, c, psi>, exact.  Zero for non-admissible colorings.
CQ eval_spin_network(const Graph& g, const Coloring& c, const Holonomy& psi = Holonomy::trivial());

// Same value by multiplying the vertex polynomials and applying the edge operators one edge at a time.
// Exponential in the graph size; meant for small inputs.
CQ eval_spin_network_symbolic(const Graph& g, const Coloring& c, const Holonomy& psi = Holonomy::trivial());

Rational theta_value(int a, int b, int c);

// v * prod_e c_e! / prod_alpha c_alpha!
CQ renormalize(const Graph& g, const Coloring& c, const CQ& v);
CQ unrenormalize(const Graph& g, const Coloring& c, const CQ& v);

// |<Gamma,c,psi>|^2 / prod_v <v>
Rational bracket_square(const Graph& g, const Coloring& c, const Holonomy& psi = Holonomy::trivial());
// prod_v theta_value at the vertex colors
Rational vertex_theta_product(const Graph& g, const Coloring& c);

struct Gauge {
    std::vector<Mat2Q> vertex;  // per vertex
    std::vector<Mat2Q> edge;    // per edge
};

// (g.psi)_h = g_e psi_h g_v^{-1}
Holonomy gauge_transform(const Graph& g, const Holonomy& psi, const Gauge& gauge);

}  // namespace spinnet
