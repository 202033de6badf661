#pragma once

// Deformed-GOE interaction matrices and the maximum of u^T A u over the
// nonnegative unit sphere (lambda_plus_max).

#include "lvsg/frontier.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

namespace lvsg {

/// Symmetric interaction matrix Sigma = kappa / sqrt(n) W + alpha 11^T / n.
/// Matrices built from explicit entries carry no ensemble and no GOE part.
class InteractionMatrix {
public:
    static InteractionMatrix deformed_goe(int n, const EnsembleParams& ensemble, std::uint64_t seed);
    static InteractionMatrix from_entries(Eigen::MatrixXd entries);
    static InteractionMatrix zero(int n);

    int n() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXd& entries() const { return entries_; }
    const std::optional<EnsembleParams>& ensemble() const { return ensemble_; }
    /// The GOE sample W; empty unless built by deformed_goe.
    const Eigen::MatrixXd& goe() const { return goe_; }
    std::uint64_t seed() const { return seed_; }

    /// Same ensemble and seed with entries replaced by zero (the truncated
    /// branch of Sigma~ = Sigma 1{lambda_plus_max(Sigma) < 1 - eps}).
    InteractionMatrix zeroed() const;

private:
    InteractionMatrix() = default;

    Eigen::MatrixXd entries_;
    Eigen::MatrixXd goe_;
    std::optional<EnsembleParams> ensemble_;
    std::uint64_t seed_ = 0;
};

namespace randmat {

/// W = (M + M^T) / sqrt(2) with M i.i.d. standard normal. Exactly symmetric.
Eigen::MatrixXd sample_goe(int n, std::uint64_t seed);

struct PositiveMax {
    double value = 0.0;
    Eigen::VectorXd maximizer; ///< nonnegative, unit norm
    bool converged = true;
    long iterations = 0;
};

/// Exact lambda_plus_max by enumerating supports. Cost O(2^n n^3); n <= 20.
PositiveMax lambda_plus_max_exact(const Eigen::MatrixXd& a);

struct HeuristicOptions {
    int random_restarts = 8;
    double tolerance = 1e-10;
    long max_iterations = 100000;
    std::uint64_t seed = 0x5eed;
};

/// Shifted projected power iteration u <- normalize(((A + sigma I) u)_+),
/// sigma = ||A|| + 1, best over uniform, best-diagonal and random positive
/// starts, finished by an eigen-solve on the support of the best iterate.
/// Never exceeds the exact value.
PositiveMax lambda_plus_max_heuristic(const Eigen::MatrixXd& a, const HeuristicOptions& options = {});

/// Exact for n <= 20, heuristic above.
double lambda_plus_max(const Eigen::MatrixXd& a);

/// Largest absolute eigenvalue.
double operator_norm(const Eigen::MatrixXd& a);

/// max over i outside supp(u) of (A u)_i, or -inf when u has full support.
double kkt_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& u);

/// lambda_plus_max(A) < 1 - eps_sigma.
bool is_realizable(const Eigen::MatrixXd& a, double eps_sigma);

/// Sigma~: `sigma` itself when realizable, the zero matrix otherwise.
InteractionMatrix truncate(const InteractionMatrix& sigma, double eps_sigma);

/// Throws ValidationError when max |A - A^T| > tol.
void require_symmetric(const Eigen::MatrixXd& a, double tol = 1e-12);

} // namespace randmat
} // namespace lvsg
