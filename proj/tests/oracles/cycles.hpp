#pragma once
// Cycle polynomial by choosing at most one angle per vertex: a choice is a disjoint union of
// cycles exactly when every edge is used at both of its endpoints or at neither.

#include "spinnet/graph.hpp"
#include "spinnet/series.hpp"

#include <vector>

namespace oracle {

inline spinnet::MPoly cycle_polynomial(const spinnet::Graph& g) {
    using namespace spinnet;
    SpacePtr s = angle_space(g);
    const int V = static_cast<int>(g.vertices.size());
    const auto& angles = g.angles();
    MPoly out(s);
    std::vector<int> pick(V, 0);  // 0 = none, k+1 = angle k of the vertex
    for (;;) {
        std::vector<int> used(g.edges.size(), 0);
        Mono m;
        for (int v = 0; v < V; ++v) {
            if (!pick[v]) continue;
            int a = 3 * v + pick[v] - 1;
            ++used[g.edge_of(angles[a].first)];
            ++used[g.edge_of(angles[a].second)];
            ++m.e[a];
        }
        bool ok = true;
        for (int u : used) ok = ok && (u == 0 || u == 2);
        if (ok) out.add_term(m, CQ(1));
        int v = 0;
        while (v < V && pick[v] == 3) pick[v++] = 0;
        if (v == V) break;
        ++pick[v];
    }
    return out;
}

}  // namespace oracle
