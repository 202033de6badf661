#pragma once

// Finitely supported Parisi measures and the Parisi functional
//   P_a(zeta, h, gamma) = X_0 - beta^2 kappa^2 / 4 sum_k lambda_k (b_{k+1}^2 - b_k^2)
// where X_K = log int_0^a exp(x u + beta alpha h x + gamma x^2) mu_beta(dx),
// u = beta kappa sum_k z_k sqrt(b_k - b_{k-1}), and
// X_k = 1/lambda_k log E_{z_{k+1}} exp(lambda_k X_{k+1}).

#include "lvsg/quadrature.hpp"

#include <functional>
#include <optional>
#include <string>
#include <span>
#include <vector>

namespace lvsg::parisi {

struct Model {
    double beta = 2.0;
    double kappa = 0.3;
    double alpha = 0.0;
    double phi = 1.0;

    void validate() const; ///< beta > 0, kappa >= 0, phi beta > 1
};

/// xi(x) = beta^2 kappa^2 x^2 / 2 and theta(x) = x xi'(x) - xi(x) (= xi here).
struct CovarianceFns {
    double beta;
    double kappa;

    double xi(double x) const { return 0.5 * beta * beta * kappa * kappa * x * x; }
    double xi_prime(double x) const { return beta * beta * kappa * kappa * x; }
    double theta(double x) const { return x * xi_prime(x) - xi(x); }
};

/// zeta({b_k}) = lambda_k - lambda_{k-1}, lambda_{-1} = 0, lambda_K = 1.
/// lambdas strictly increase in (0, 1); atoms start at 0, end at D and never
/// decrease. Repeated atoms are accepted (they describe the same measure as the
/// merged level); is_strict() reports membership in the strictly increasing
/// family.
class ParisiMeasure {
public:
    ParisiMeasure(std::vector<double> lambdas, std::vector<double> atoms);

    int levels() const { return static_cast<int>(lambdas_.size()); }
    double max_support() const { return atoms_.back(); }
    const std::vector<double>& lambdas() const { return lambdas_; }
    const std::vector<double>& atoms() const { return atoms_; }
    /// Point masses zeta({b_0}), ..., zeta({b_K}).
    std::vector<double> weights() const;
    bool is_strict() const;

private:
    std::vector<double> lambdas_;
    std::vector<double> atoms_;
};

struct Args {
    double a = 5.0;     ///< box edge, > 0
    double h = 0.0;     ///< auxiliary field, >= 0
    double gamma = 0.0; ///< multiplier of x^2
    Model model;

    void validate() const;
};

/// u -> log int_0^a exp(x u + beta alpha h x + gamma x^2) mu_beta(dx) on a
/// fixed node layout valid for u in [u_lo, u_hi] (accurate, but not
/// guaranteed, outside it).
class LeafIntegral {
public:
    LeafIntegral(const Args& args, double u_lo, double u_hi);
    double operator()(double u) const;

private:
    std::vector<double> nodes_;
    std::vector<double> base_; ///< log weight plus the u-independent exponent
};

/// X_{K,a} for one draw of the level Gaussians z_1..z_K.
double x_leaf(const Args& args, std::span<const double> z, const ParisiMeasure& zeta);

struct RecursionOptions {
    int order = 40;               ///< Gauss-Hermite points per level
    bool check_doubling = false;  ///< also evaluate with 2 * order
    double doubling_tolerance = 1e-8;
};

struct RecursionResult {
    double value;
    std::optional<double> doubling_change; ///< |X_0(2Q) - X_0(Q)| when checked
    bool flagged = false;                  ///< doubling change above tolerance
};

/// X_{0,a}(zeta, h, gamma). Tensor Gauss-Hermite for K <= 3; for K >= 4 the
/// level functions X_k(s) of the partial sum s are carried on Chebyshev grids.
RecursionResult recursion_x0(const ParisiMeasure& zeta, const Args& args, const RecursionOptions& options = {});

/// Generic nested recursion with an arbitrary leaf X_K(z_1..z_K) by tensor
/// Gauss-Hermite quadrature (Q^K leaf calls).
double nested_recursion(std::span<const double> lambdas, const std::function<double(std::span<const double>)>& leaf,
                        int order = 40);

/// beta^2 kappa^2 / 4 sum_k lambda_k (b_{k+1}^2 - b_k^2).
double correction_sum_form(const ParisiMeasure& zeta, const Model& model);
/// -1/2 int theta d zeta + 1/2 theta(D).
double correction_theta_form(const ParisiMeasure& zeta, const Model& model);

/// P_a(zeta, h, gamma).
double parisi_value(const ParisiMeasure& zeta, const Args& args, const RecursionOptions& options = {});

/// P_a(zeta, h, gamma) - gamma D - beta alpha h^2 / 2 with D the max support of zeta.
double objective(const ParisiMeasure& zeta, const Args& args, const RecursionOptions& options = {});

// ---------------------------------------------------------------------------
// Saddle search

struct SaddleOptions {
    int levels = 1;
    int order = 40;
    double a_min = 0.1;
    double a_max = 50.0;
    double d_min = 0.01;
    double d_max = 25.0;
    double gamma_bound = 50.0;
    int inner_sweeps = 40;
    double inner_tolerance = 1e-12;
    int outer_evaluations = 300;
    int polish_sweeps = 6;
    double residual_tolerance = 1e-4;
    std::optional<double> fixed_a; ///< pin the box edge instead of maximizing over it
    std::optional<double> fixed_d;
    std::optional<double> fixed_h;
};

struct InnerSolution {
    double value = 0.0;
    std::vector<double> lambdas;
    std::vector<double> atoms;
    double gamma = 0.0;
    double h = 0.0;
    std::vector<double> residuals; ///< projected partial derivatives
    long evaluations = 0;
};

/// inf over zeta in fop_D (with K levels), gamma, and h >= 0 when alpha <= 0,
/// at fixed a, D and (alpha > 0) h.
InnerSolution inner_infimum(const Model& model, double a, double d, double h, const SaddleOptions& options,
                            const InnerSolution* warm_start = nullptr);

struct SaddleResult {
    double value = 0.0;
    double a = 0.0;
    double d = 0.0;
    InnerSolution inner;
    std::vector<std::string> residual_names;
    std::vector<double> residuals;
    double max_residual = 0.0;
    bool converged = false;
    long evaluations = 0;
};

/// sup over (a, D) [and h when alpha > 0] of the inner infimum. Requires
/// lambda_+(alpha, kappa) < 1. Never throws on non-convergence; check
/// `converged` (max_residual <= residual_tolerance).
SaddleResult saddle_search(const Model& model, const SaddleOptions& options = {});

} // namespace lvsg::parisi
