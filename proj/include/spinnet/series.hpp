#pragma once

#include "spinnet/graph.hpp"
#include "spinnet/poly.hpp"

#include <vector>

namespace spinnet {

// One variable X_<first>_<second> per angle, in Graph::angles() order.
SpacePtr angle_space(const Graph& g);
Mono angle_monomial(const Graph& g, const InternalColoring& a);

struct PQMatrices {
    SpacePtr space;
    PolyMatrix full;  // P + Q_psi in the basis z_h (2h), w_h (2h+1)

    PolyMatrix P() const;  // constant part
    PolyMatrix Q() const;  // X-linear part
};

PQMatrices build_pq(const Graph& g, const Holonomy& psi = Holonomy::trivial());

// det(P + Q_psi)^{-1/2} to total degree D.  Crossings are ignored here; see nonplanar_fix.
TruncSeries series_Z(const Graph& g, const Holonomy& psi, int D);

// Sum over admissible colorings with sum of colors <= D of the renormalized evaluation
// (crossing sign included) times X^{c_alpha}.
TruncSeries evaluation_series(const Graph& g, const Holonomy& psi, int D);

CQ series_coefficient(const Graph& g, const TruncSeries& s, const Coloring& c);

// Sum over disjoint unions of cycles of the product of the angles they traverse.
MPoly westbury_polynomial(const Graph& g);

Holonomy diagonal_holonomy(const std::vector<Rational>& t);

// The matrix W1 on the blown-up graph: edges l->r carry 1 (r->l: -1),
// angles first->second carry X t_second/t_first (reverse: -X t_first/t_second).
PolyMatrix build_w1(const Graph& g, const std::vector<Rational>& t);

// Sum over configurations of oriented curves and dimers on the blown-up graph of
// (-1)^{#c+#d} w(c) w(d).  Equals det(W1); its inverse is Z for the diagonal holonomy t.
MPoly abelian_curve_sum(const Graph& g, const std::vector<Rational>& t);

// Sum over perfect matchings of the blown-up graph of the product of matched angles.
MPoly pfaffian_dimer_sum(const Graph& g);

// Applies S_x for every registered crossing x.
TruncSeries nonplanar_fix(const TruncSeries& s, const Graph& g);

}  // namespace spinnet
