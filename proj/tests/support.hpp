#pragma once

#include "spinnet/graph.hpp"
#include "spinnet/evaluator.hpp"

#include <random>

namespace testing_support {

using namespace spinnet;

inline Rational rq(long p, long q = 1) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

inline CQ small_cq(std::mt19937_64& rng, bool complex_part = true) {
    std::uniform_int_distribution<long> num(-4, 4), den(1, 3);
    return CQ(rq(num(rng), den(rng)), complex_part ? rq(num(rng), den(rng)) : Rational(0));
}

// upper * lower * diag(t, 1/t): determinant exactly 1
inline Mat2Q random_sl2(std::mt19937_64& rng, bool complex_entries = true) {
    Mat2Q u{CQ(1), small_cq(rng, complex_entries), CQ(0), CQ(1)};
    Mat2Q l{CQ(1), CQ(0), small_cq(rng, complex_entries), CQ(1)};
    std::uniform_int_distribution<long> tn(1, 3), td(1, 3);
    Rational t = rq(tn(rng), td(rng));
    Mat2Q d{CQ(t), CQ(0), CQ(0), CQ(Rational(1 / t))};
    return u * l * d;
}

inline Holonomy random_holonomy(const Graph& g, std::mt19937_64& rng) {
    std::vector<Mat2Q> m;
    for (int h = 0; h < g.num_half(); ++h) m.push_back(random_sl2(rng));
    return make_exact_holonomy(m);
}

inline Gauge random_gauge(const Graph& g, std::mt19937_64& rng) {
    Gauge gg;
    for (size_t v = 0; v < g.vertices.size(); ++v) gg.vertex.push_back(random_sl2(rng));
    for (size_t e = 0; e < g.edges.size(); ++e) gg.edge.push_back(random_sl2(rng));
    return gg;
}

}  // namespace testing_support
