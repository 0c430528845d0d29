#pragma once

#include "spinnet/graph.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace spinnet {

using Vec3 = Eigen::Vector3d;

// Unit vector per edge, oriented from the left endpoint to the right endpoint.
struct Configuration {
    std::vector<Vec3> P;
    double residual = 0;            // max over vertices of |sum_i c_i P_i|
    std::vector<double> signature;  // canonical coordinates after the rotation gauge fix
};

struct FindResult {
    std::vector<Configuration> configs;  // sorted by signature; P and -P both present
    std::vector<int> hits;               // restarts that landed in each class
    int restarts = 0, converged = 0;
    std::vector<std::string> warnings;
};

// Throws HypothesisError unless every vertex satisfies the strict triangle inequalities.
void require_strict_triangles(const Graph& g, const Coloring& c);

double closure_residual(const Graph& g, const Coloring& c, const std::vector<Vec3>& P);
Configuration make_configuration(const Graph& g, const Coloring& c, std::vector<Vec3> P);
Configuration negate(const Graph& g, const Coloring& c, const Configuration& p);

// Multistart Levenberg-Marquardt on (S^2)^E, deduplicated modulo rotations.
FindResult find_configs(const Graph& g, const Coloring& c, int restarts = 200, double tol = 1e-10, uint64_t seed = 1);

using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using cdouble = std::complex<double>;

// sum_e c_e (I - P_e P_e^T)
Eigen::Matrix3d r_form(const Graph& g, const std::vector<double>& w, const std::vector<Vec3>& P);
// matrix of sum_e c_e |P_e x (xi_v - xi_w)|^2 on R^{3V}
RMat qP_form(const Graph& g, const std::vector<double>& w, const std::vector<Vec3>& P);

// Vertex rotations g_v (SU2 lifts) with g_v P_e = Q_e, the phases tau_e and theta_e in (0, pi).
struct PairData {
    std::vector<Eigen::Matrix2cd> lift;
    std::vector<cdouble> tau;
    std::vector<double> theta;
    double lift_residual = 0;   // max |R(g_v) P_e - Q_e|
    double phase_residual = 0;  // max | |tau_e| - 1 |
};
PairData pair_data(const Graph& g, const Configuration& P, const Configuration& Q);

CMat qkappa_form(const Graph& g, const Coloring& c, const Configuration& Q, const PairData& pd, double kappa);
// The kappa -> 1 form: sum_e c_e (-i cot(theta_e) |Q_e x (xi_v - xi_w)|^2 + 2i <Q_e, xi_v x xi_w>)
CMat qpp_form(const Graph& g, const Coloring& c, const Configuration& Q, const PairData& pd);

struct Forms {
    Eigen::Matrix3d r;
    RMat qP;
    CMat qk;
};
Forms build_forms(const Graph& g, const Coloring& c, const Configuration& P, const Configuration& Q, double kappa);

struct DetPrime {
    cdouble value, sqrt;  // sqrt = product of principal square roots
    int kernel_dim = 0;
    double threshold = 0;
    double gap = 0;  // |lambda_{k+1}| / |lambda_k|, infinite when k = 0
    std::vector<cdouble> eigenvalues;  // sorted by modulus
};
// Eigenvalues below rel_threshold * max|lambda| form the kernel; throws HypothesisError if there are not kernel_dim of them.
DetPrime detprime(const CMat& m, int kernel_dim, double rel_threshold = 1e-8);
int numerical_corank(const CMat& m, double rel_threshold = 1e-8);

struct DetPrimeLimit {
    cdouble value, sqrt;
    double error = 0;  // spread of the last two extrapolants, relative
    std::vector<cdouble> sequence;  // (kappa_j - 1)^{-3} det'(q^kappa_j), j = 6..12
};
// Richardson extrapolation of (kappa-1)^{-3} det'(q^kappa) to kappa = 1.
DetPrimeLimit detprime_limit(const Graph& g, const Coloring& c, const Configuration& P, const Configuration& Q);

struct HypothesisReport {
    bool h1 = true, h2 = true, h3 = true;
    std::vector<int> qP_kernel;     // per configuration
    std::vector<double> qP_gap;     // per configuration
    std::vector<int> qk_kernel;     // per ordered pair, kappa = 1 + 2^-8
    std::vector<int> qpp_kernel;    // per ordered pair
    std::vector<double> min_tau_distance;  // per ordered pair, min_e |tau_e^2 - 1|
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::string> witnesses;
    bool ok() const { return h1 && h2 && h3; }
};
HypothesisReport check_hypotheses(const Graph& g, const Coloring& c, const std::vector<Configuration>& configs);

// Kernel dimension of q_P; independent of the positive edge weights.
int h1_kernel_dim(const Graph& g, const std::vector<Vec3>& P, double rel_threshold = 1e-8);

struct PairTerm {
    int p = 0, q = 0;
    std::vector<double> theta;
    cdouble sqrt_detprime;
    double detprime_error = 0;
    double conjugation_defect = 0;  // |T(-P,-Q) - conj T(P,Q)| / |T(P,Q)| at k = 1
};

// Everything k-independent in the leading-order formula.
struct AsymptoticData {
    int N = 0;
    std::vector<Configuration> configs;
    std::vector<double> det_r, detprime_qP;
    std::vector<PairTerm> pairs;  // one per class {(P,Q), (-P,-Q)}, P != Q
    HypothesisReport report;
};
AsymptoticData prepare_asymptotics(const Graph& g, const Coloring& c, const std::vector<Configuration>& configs);

struct AsymptoticEstimate {
    int k = 0;
    double value = 0, prefactor = 0, first_sum = 0, second_sum = 0;
    std::vector<double> pair_terms;
};
AsymptoticEstimate asymptotic_estimate(const AsymptoticData& d, const Coloring& c, int k);

}  // namespace spinnet
