#pragma once

#include "spinnet/graph.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>

namespace spinnet {

// Unit quaternion a + b i + c j + d k, acting on C^2 as [[a+bi, -(c-di)], [c+di, a-bi]].
struct SU2Sample {
    double q[4] = {1, 0, 0, 0};

    Mat2D matrix() const;
    double theta() const;  // rotation angle in [0, pi], tr = 2 cos(theta)
};

using Rng = std::mt19937_64;

SU2Sample sample_haar(Rng& rng);
// Uniform point of the unit sphere S^3 in C^2.
std::array<cd, 2> sample_s3(Rng& rng);

// sin((n+1) theta) / sin(theta), with the limits at 0 and pi.
double char_value(int n, double theta);
// Character of the n-th symmetric power for any SL2 matrix (Chebyshev recurrence in the trace).
cd char_value(int n, const Mat2D& m);

struct MCEstimate {
    double mean = 0, stderr_ = 0;
    double mean_im = 0, stderr_im = 0;  // imaginary part, zero for real integrands
    long long count = 0;
    uint64_t seed = 0;
    int workers = 1;
};

// Worker i draws samples/workers (+1 for the first samples%workers workers) from its own
// generator seeded by splitmix64(seed, i); partial moments are merged in worker order.
MCEstimate run_mc(long long samples, uint64_t seed, int workers, const std::function<cd(Rng&)>& integrand);

// Worker count from SPINNET_WORKERS, else 1.
int default_workers();

// Holonomy as floating matrices (identity when trivial).
std::vector<Mat2D> float_holonomy(const Graph& g, const Holonomy& psi);

MCEstimate mc_bracket(const Graph& g, const Coloring& c, const Holonomy& psi, long long samples, uint64_t seed, int workers = 1);
MCEstimate mc_W_point(const Graph& g, const Holonomy& psi, const std::vector<double>& y, long long samples, uint64_t seed, int workers = 1);
MCEstimate mc_orthogonality(const Graph& g, const Coloring& c, long long samples, uint64_t seed, int workers = 1);

// prod_v <v> / prod_e (c_e + 1)
double orthogonality_target(const Graph& g, const Coloring& c);
// 1 / prod over 2-cycles (1 - y_i y_j) for the theta graph
double theta_W_target(const std::vector<double>& y);

// E_g[tr_c(A g) tr_c(B g)]; compare with tr_c(A B^{-1}) / (c + 1).
MCEstimate mc_prodtrace(int c, const Mat2D& a, const Mat2D& b, long long samples, uint64_t seed, int workers = 1);
// (n + 1) E_v[<v, g v>^n]; compare with tr_n(g).
MCEstimate mc_coherent(int n, const Mat2D& g, long long samples, uint64_t seed, int workers = 1);
// E[tr_1(g)] and E[tr_1(g)^2]
MCEstimate mc_char_moment(int power, long long samples, uint64_t seed, int workers = 1);

}  // namespace spinnet
