#pragma once

// Truncated-Gaussian moment functions and the large-n limit of the maximum of
// u^T Sigma u over the nonnegative unit sphere for the deformed GOE
//   Sigma_n = kappa / sqrt(n) W_n + alpha 11^T / n.

#include <span>
#include <vector>

namespace lvsg {

struct EnsembleParams {
    double kappa = 1.0; ///< scale of the GOE part, > 0
    double alpha = 0.0; ///< mean interaction strength

    void validate() const;
};

namespace frontier {

/// log E(Z+x)_+^k for k = 0, 1, 2 (k = 0 is P(Z > -x) = Phi(x)) and
/// log E Z(Z+x)_+ (which equals log Phi(x)). Finite for every finite x.
struct LogMoments {
    double log_phi_cdf;  ///< log Phi(x) = log E Z (Z+x)_+
    double log_first;    ///< log E (Z+x)_+
    double log_second;   ///< log E (Z+x)_+^2
};
LogMoments log_moments(double x);

/// d(x) = E (Z+x)_+^2. Underflows to 0 below x ~ -38; use log_gauss_d there.
double gauss_d(double x);
double log_gauss_d(double x);
/// f(x) = E(Z+x)_+ / sqrt(d(x)), increasing from 0 to 1.
double gauss_f(double x);
/// g(x) = E Z(Z+x)_+ / sqrt(d(x)), maximal at 0 where it equals 1/sqrt(2).
double gauss_g(double x);

/// r_alpha(x) = alpha f(x)^2 + 2 g(x); its unique maximizer solves x = alpha f(x).
double r_alpha(double alpha, double x);

/// Unique root of x = (alpha / kappa) f(x), by bisection on
/// [-|alpha|/kappa - 1, |alpha|/kappa + 1] to absolute tolerance 1e-12.
double solve_c(const EnsembleParams& params);

struct FrontierPoint {
    double alpha;
    double kappa;
    double lambda_plus;
    double c;
};

/// lambda_+(alpha, kappa) = alpha f(c)^2 + 2 kappa g(c).
FrontierPoint lambda_plus(const EnsembleParams& params);

/// Unique x with f(x) = s, s in (0, 1).
double inverse_f(double s);

/// The alpha at which lambda_+(., kappa) = 1, searched on [-50, 50].
/// Throws ConvergenceError when lambda_+ - 1 has no sign change on the bracket.
FrontierPoint frontier_alpha(double kappa);

/// frontier_alpha over a grid; every kappa must lie in (0, 1/sqrt(2)].
std::vector<FrontierPoint> frontier_curve(std::span<const double> kappa_grid);

/// Gaussian-comparison bound on the slice s = <u, 1/sqrt(n)> for kappa = 1:
/// alpha f(c~)^2 - 2 c~ f(c~) + 2 sqrt(d(c~)) with f(c~) = s. Never exceeds
/// lambda_plus(alpha, 1).
double sudakov_bound(double s, const EnsembleParams& params);

} // namespace frontier
} // namespace lvsg
