#pragma once

// Truncated Ruelle probability cascades on [N]^K, the Gaussian tree processes
// q_i and y_i, and Monte-Carlo checks of
//   X_0 = E log sum_i v_i exp X_K(z_{i1}, z_{i1 i2}, ..., z_{i1..iK}).

#include "lvsg/parisi.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace lvsg::rpc {

/// Leaf weights in lexicographic order of (i_1..i_K), stored as logs.
struct CascadeSample {
    int levels = 0;
    int branching = 0;
    std::vector<double> lambdas;
    std::vector<double> log_weights; ///< normalized: log sum exp = 0
    std::vector<double> level_truncation; ///< mean tail-to-total mass estimate per level
    double retained_mass_estimate = 1.0;  ///< prod_k (1 - level_truncation_k)

    std::size_t leaves() const { return log_weights.size(); }
    std::vector<double> weights() const;
    /// Path (i_1..i_K) of leaf index `leaf`.
    std::vector<int> path(std::size_t leaf) const;
};

/// Each node at level k keeps the N largest atoms u_j = Gamma_j^(-1/lambda_k) of a
/// Poisson process with intensity lambda_k u^(-lambda_k - 1) du; a leaf weight
/// is the product along its path, normalized over all retained leaves.
/// Requires N >= 100 (unless allow_small) and N^K <= 10^6.
CascadeSample sample_cascade(std::span<const double> lambdas, int branching, std::uint64_t seed,
                             bool allow_small = false);
CascadeSample sample_cascade(std::span<const double> lambdas, int branching, std::mt19937_64& rng,
                             bool allow_small = false);

/// One standard normal per node; level k (1-based) holds N^k values in
/// lexicographic order of (i_1..i_k).
struct TreeGaussians {
    int levels = 0;
    int branching = 0;
    std::vector<std::vector<double>> z;

    double at(std::span<const int> path, int level) const;
};

TreeGaussians sample_tree_gaussians(int levels, int branching, std::mt19937_64& rng);

/// q_i = beta kappa sum_k z_{i1..ik} sqrt(b_k - b_{k-1}).
double q_leaf(std::span<const int> path, const TreeGaussians& z, const parisi::ParisiMeasure& zeta, double beta,
              double kappa);
/// y_i = beta kappa / sqrt(2) sum_k z_{i1..ik} sqrt(b_k^2 - b_{k-1}^2).
double y_leaf(std::span<const int> path, const TreeGaussians& z, const parisi::ParisiMeasure& zeta, double beta,
              double kappa);

/// q (or y) for every leaf in lexicographic order.
std::vector<double> q_all(const TreeGaussians& z, const parisi::ParisiMeasure& zeta, double beta, double kappa);
std::vector<double> y_all(const TreeGaussians& z, const parisi::ParisiMeasure& zeta, double beta, double kappa);

/// Leaf functional used by verify_prpc.
struct Leaf {
    enum class Kind { mu_beta, linear, y_process, constant };
    Kind kind = Kind::mu_beta;
    std::vector<double> slopes; ///< linear: X_K = offset + sum_k slopes_k z_k
    double offset = 0.0;

    static Leaf mu_beta() { return {}; }
    static Leaf linear(std::vector<double> c, double m) { return {Kind::linear, std::move(c), m}; }
    static Leaf y_process() { return {Kind::y_process, {}, 0.0}; }
    static Leaf constant(double c) { return {Kind::constant, {}, c}; }
};

struct VerifyOptions {
    int branching = 1000;
    int replicas = 200;
    std::uint64_t seed = 1;
    int jobs = 1;
    int order = 40; ///< Gauss-Hermite order of the recursion
};

struct VerifyResult {
    double mc_estimate;
    double recursion_value;
    double std_error;
    double z_score;
    int branching;
    int replicas;
    double retained_mass_estimate; ///< mean over replicas
};

/// MC average of log sum_i v_i exp X_K(path Gaussians) against the recursion:
/// parisi::recursion_x0 for the mu_beta leaf, closed forms for the linear and
/// y leaves. z_score = (mc - recursion) / std_error.
VerifyResult verify_prpc(const parisi::ParisiMeasure& zeta, const parisi::Args& args, const Leaf& leaf,
                         const VerifyOptions& options = {});

/// m + 1/2 sum_k lambda_k c_{k+1}^2.
double linear_leaf_x0(std::span<const double> lambdas, std::span<const double> slopes, double offset);

} // namespace lvsg::rpc
