#pragma once

// Invariant Gibbs measure G(dx) = exp(H(x)/T) / Z dx of the Lotka-Volterra SDE,
// written as exp(H_n(x)) mu_beta^{(x)n}(dx) with
//   mu_beta(dx) = x^(phi beta - 1) exp(-beta x^2 / 2 + beta x) dx,
//   H_n(x)     = beta / 2 x^T Sigma x.

#include "lvsg/model.hpp"
#include "lvsg/quadrature.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace lvsg::gibbs {

/// H(x) = 1/2 x^T (Sigma - I) x + 1.x + (phi - T) 1.log x, for x > 0 and phi > T.
double hamiltonian(const Eigen::VectorXd& x, const ModelParams& params);

/// H_n(x) = beta / 2 x^T Sigma x.
double interaction_energy(const Eigen::VectorXd& x, const ModelParams& params);

/// One-site measure x^(phi beta - 1) exp(-beta x^2 / 2 + beta (1 + tilt) x) dx.
/// tilt = 0 is mu_beta; tilt = alpha h is the external-field measure nu_{beta,h}.
struct BaseMeasure {
    double beta = 1.0;
    double phi = 1.0;
    double tilt = 0.0;

    double power() const { return phi * beta - 1.0; }
    double log_density(double x) const;
    double density(double x) const;
    /// Quadrature rule for integrals against this measure on [0, upper]
    /// (upper = inf truncates where the density is below e^-46 of its peak).
    quad::Rule rule(double upper = std::numeric_limits<double>::infinity()) const;
    /// log of the total mass on [0, upper].
    double log_mass(double upper = std::numeric_limits<double>::infinity()) const;
    /// Mean of x under the normalized measure on [0, upper].
    double mean(double upper = std::numeric_limits<double>::infinity()) const;
};

/// mu_beta for the model; rejects phi beta <= 1.
BaseMeasure mu_beta(const ModelParams& params);

/// Unnormalized mu_beta density at x1 > 0.
double mu_beta_density(double x1, const ModelParams& params);

/// nu_{beta,h}: mu_beta tilted by exp(beta alpha h x). Reduces to mu_beta at h = 0
/// or alpha = 0.
BaseMeasure external_field_measure(const ModelParams& params, double alpha, double h);

enum class Domain { orthant, ball, box };

/// exp(t * Q(x)) prod_i base(dx_i) restricted to a domain, where Q(x) is
/// H_n(x) or, with an external field, beta kappa / (2 sqrt n) x^T W x.
struct GibbsTarget {
    ModelParams params;
    Domain domain = Domain::orthant;
    /// a for the box [0, a]^n, A for the ball of radius A sqrt(n).
    double domain_size = 0.0;
    std::optional<double> external_field;

    int n() const { return params.n(); }
    /// Checks the Gibbs conditions and, on the orthant, normalizability
    /// (lambda_plus_max of the quadratic form below 1).
    void validate() const;
    BaseMeasure base() const;
    /// Matrix M with interaction(x) = beta / 2 x^T M x.
    Eigen::MatrixXd quadratic_matrix() const;
    double interaction(const Eigen::VectorXd& x) const;
    bool contains(const Eigen::VectorXd& x) const;
    /// Per-coordinate upper limit of the region carrying the mass.
    double coordinate_limit() const;
};

struct QuadratureOptions {
    int order = 24;           ///< Gauss-Legendre points per panel
    double panel_budget = 10; ///< allowed log-integrand change per panel
};

/// log Z = log int exp(interaction) prod base over the domain, by tensor-product
/// quadrature. n <= 3.
double quadrature_log_z(const GibbsTarget& target, const QuadratureOptions& options = {});

/// Expectation of fn under the normalized target, by the same quadrature. n <= 3.
double quadrature_expectation(const GibbsTarget& target, const std::function<double(const Eigen::VectorXd&)>& fn,
                              const QuadratureOptions& options = {});

/// Smooth compactly supported test function with analytic derivatives:
/// exp(1 - 1 / (1 - r^2)) for r^2 = sum_i ((x_i - c_i) / w_i)^2 < 1.
struct Bump {
    Eigen::VectorXd center;
    Eigen::VectorXd width;

    double value(const Eigen::VectorXd& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;
};

/// Generator of the SDE applied to a C^2 function:
///   A f(x) = <grad f, x o (1 + (Sigma - I) x) + phi> + T sum_i d_ii f(x) x_i.
double generator(const Bump& fn, const Eigen::VectorXd& x, const ModelParams& params);

/// int A f dG over the orthant for a bump f; zero for the invariant measure. n <= 2.
double generator_residual(const Bump& fn, const GibbsTarget& target, int panels_per_dim = 48, int order = 16);

struct McmcOptions {
    long chain_length = 20000; ///< recorded steps after burn-in
    long burn_in = 5000;       ///< adaptation steps, discarded
    long thin = 1;
    double coupling = 1.0;     ///< t in exp(t * interaction)
    std::uint64_t seed = 1;
    std::optional<Eigen::VectorXd> initial;
    double target_acceptance = 0.3;
};

struct McmcSamples {
    int n = 0;
    std::vector<double> states;      ///< row-major, n values per recorded step
    std::vector<double> interaction; ///< interaction energy at each recorded step
    double acceptance_rate = 0.0;
    double proposal_scale = 0.0;

    std::size_t size() const { return interaction.size(); }
    Eigen::Map<const Eigen::VectorXd> state(std::size_t i) const
    {
        return {states.data() + i * static_cast<std::size_t>(n), n};
    }
};

/// Random-walk Metropolis in y = log x with the Jacobian folded into the
/// acceptance ratio; proposal scale adapted toward target_acceptance during
/// burn-in, frozen afterwards. Domain constraints by rejection.
McmcSamples mcmc_sample(const GibbsTarget& target, const McmcOptions& options);

struct MeanEstimate {
    double mean;
    double std_error;
};

/// Batch-means estimate of E fn from a chain.
MeanEstimate chain_mean(const std::vector<double>& values, int batches = 20);

/// Potential scale reduction factor of several chains' traces.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

struct ThermoOptions {
    int t_points = 21;
    int refinement_passes = 1;
    McmcOptions chain;
    int batches = 20;
};

struct FreeEnergyEstimate {
    int n = 0;
    double value = 0.0;     ///< per-site log partition function
    double std_error = 0.0; ///< per site
    double log_z = 0.0;     ///< n * value
    int replicas = 1;
    std::vector<double> schedule;       ///< coupling grid t
    std::vector<double> integrand;      ///< <interaction>_t on the grid
    std::vector<std::uint64_t> seeds;
    double truncation_frequency = 0.0;
};

/// log Z(1) = log Z(0) + int_0^1 <interaction>_t dt, with log Z(0) from the
/// base-measure mass (quadrature) and the integrand by MCMC on a trapezoid grid.
FreeEnergyEstimate log_z_thermo(const GibbsTarget& target, const ThermoOptions& options);

struct DisorderOptions {
    int replicas = 20;
    std::uint64_t seed = 1;
    double eps_sigma = 0.0; ///< 0 selects (1 - lambda_+(kappa, alpha)) / 2
    ThermoOptions thermo;
    int jobs = 1;
};

/// Disorder average of per-site log Z~ over deformed-GOE draws; draws with
/// lambda_plus_max >= 1 - eps_sigma use Sigma~ = 0.
FreeEnergyEstimate free_energy_disorder_avg(int n, const EnsembleParams& ensemble, double beta, double phi,
                                            const DisorderOptions& options);

} // namespace lvsg::gibbs
