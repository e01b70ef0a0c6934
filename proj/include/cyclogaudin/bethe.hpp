// The cyclotomic Bethe equations: residuals, Jacobian, a multistart damped Newton
// solver with deflation, canonical forms under the twist symmetry, and the
// reduction to classical Bethe equations in the variables w^T.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cyclogaudin/hamiltonians.hpp"

namespace cg {

struct BetheProblem {
    ModelPtr model;
    // c(j) as 0-based Dynkin nodes.
    std::vector<int> colors;

    int m() const { return static_cast<int>(colors.size()); }
};

// Rational pairings entering the equations for a fixed color tuple.
struct BetheCoefficients {
    // site[j][r][i] = <alpha_{c(j)}, L^r lambda_i>
    std::vector<std::vector<std::vector<Rational>>> site;
    // root[j][k][r] = <alpha_{c(j)}, L^r alpha_{c(k)}>
    std::vector<std::vector<std::vector<Rational>>> root;
    // origin[j] = -1/2 sum_{r>=1} <alpha_c, L^r alpha_c> + <alpha_c, lambda_0>
    std::vector<Rational> origin;
};

// Throws ValidationError for colors outside the Dynkin diagram.
BetheCoefficients bethe_coefficients(const BetheProblem& P);

// Residual of the j-th equation; throws std::domain_error when a denominator vanishes.
template <class Field>
typename Field::value_type residual(const Field& F, const BetheProblem& P, const BetheCoefficients& C,
                                    const std::vector<typename Field::value_type>& w, int j) {
    using S = typename Field::value_type;
    const Model& M = *P.model;
    int T = M.T();
    auto z = site_values(F, M);
    auto inv = [](const S& d) {
        if (is_zero(d)) throw std::domain_error("coincident points in the Bethe equations");
        return reciprocal(d);
    };
    S acc = F.zero();
    for (int r = 0; r < T; ++r) {
        for (int i = 0; i < M.N(); ++i)
            if (C.site[j][r][i] != 0) acc += mul_q(inv(S(w[j] - F.omega(r) * z[i])), C.site[j][r][i]);
        for (int k = 0; k < P.m(); ++k)
            if (k != j && C.root[j][k][r] != 0) acc -= mul_q(inv(S(w[j] - F.omega(r) * w[k])), C.root[j][k][r]);
    }
    if (C.origin[j] != 0) acc += mul_q(inv(w[j]), C.origin[j]);
    return acc;
}

template <class Field>
std::vector<typename Field::value_type> residual_vector(const Field& F, const BetheProblem& P,
                                                        const std::vector<typename Field::value_type>& w) {
    if (static_cast<int>(w.size()) != P.m()) throw std::invalid_argument("number of roots differs from m");
    auto C = bethe_coefficients(P);
    std::vector<typename Field::value_type> out;
    for (int j = 0; j < P.m(); ++j) out.push_back(residual(F, P, C, w, j));
    return out;
}

// Analytic m x m Jacobian d residual_j / d w_k.
Eigen::MatrixXcd jacobian(const BetheProblem& P, const BetheCoefficients& C, const std::vector<Complex>& w);
Eigen::MatrixXcd jacobian(const BetheProblem& P, const std::vector<Complex>& w);

struct SolverOptions {
    int starts = 48;
    double tol = 1e-12;
    std::uint64_t seed = 1;
    int max_iter = 200;
    // Minimal separation between root orbits, sites and the origin.
    double coincidence_tol = 1e-9;
    // Converged points with a root within degeneracy_tol * scale of the origin or of
    // another root's orbit are rejected: such points are multiple zeros of the
    // equations, which Newton approaches only to about sqrt(tol).
    double degeneracy_tol = 1e-5;
    // 0 means: CYCLOGAUDIN_THREADS if set, else the hardware concurrency.
    int threads = 0;
};

struct CanonicalRoots {
    std::vector<int> colors;
    std::vector<Complex> roots;
    // Root j of the input went to omega^{shift[j]} w_j before sorting.
    std::vector<int> shifts;
};

// w_j -> omega^{k_j} w_j and c(j) -> pi^{k_j} c(j), with arg(omega^{k_j} w_j) in [0, 2 pi/T),
// then sorted by color and position.
CanonicalRoots canonicalize(const AutoTable& A, const std::vector<int>& colors, const std::vector<Complex>& w);
bool same_canonical(const CanonicalRoots& a, const CanonicalRoots& b, double tol);

struct BetheSolution {
    std::vector<int> colors;
    std::vector<Complex> roots;
    double residual = 0;
    int iterations = 0;
    CanonicalRoots canonical;
};

struct SolutionSet {
    std::vector<BetheSolution> solutions;
    int starts = 0;
    // Starts that did not converge to a new admissible solution.
    int failed = 0;
    // Converged starts whose canonical form duplicated an earlier solution.
    int merged = 0;
    // Set when the system is underdetermined (an equation with no terms).
    std::string note;
};

// Worker count from CYCLOGAUDIN_THREADS (if a positive integer), else the hardware concurrency.
int default_thread_count();

// Results are independent of the thread count.
SolutionSet solve(const BetheProblem& P, const SolverOptions& opt = {});
// Solves every nondecreasing color tuple of length m and merges canonical duplicates.
SolutionSet solve_all_colorings(const ModelPtr& M, int m, const SolverOptions& opt = {});

// Requires a trivial diagram permutation.  Compares residual(w) with
// T w^{T-1} times the classical residual at w^T, z^T whose 1/w~ coefficient is
// (1/T)(origin coefficient); for sigma = id that coefficient must vanish exactly.
Certificate untwisted_reduction_check(const BetheProblem& P, int trials, std::uint64_t seed);

nlohmann::json to_json(const SolutionSet& s);
SolutionSet solutions_from_json(const nlohmann::json& j);

}  // namespace cg
