#include "lvsg/frontier.hpp"

#include "lvsg/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace lvsg {

void EnsembleParams::validate() const
{
    require(std::isfinite(kappa) && kappa > 0.0, "kappa must be positive, got " + std::to_string(kappa));
    require(std::isfinite(alpha), "alpha must be finite");
}

namespace frontier {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178; // log sqrt(2 pi)

// Below this point the erfc form loses more than ~1e-11 relative accuracy to
// cancellation in (1 + x^2) Phi + x phi; the asymptotic series is exact there.
constexpr double kSeriesThreshold = -10.0;

// J_k(t) = int_0^inf s^k exp(-t s - s^2/2) ds, t >= 10, via its asymptotic
// expansion sum_m (-1)^m (k+2m)! / (2^m m! t^(k+2m+1)), truncated at the
// smallest term.
double log_laplace_moment(int k, double t)
{
    double term = 1.0;
    for (int i = 2; i <= k; ++i) term *= i;
    term /= std::pow(t, k + 1);
    double sum = term;
    for (int m = 0; m < 200; ++m) {
        const double ratio = -static_cast<double>((k + 2 * m + 1) * (k + 2 * m + 2)) / (2.0 * (m + 1) * t * t);
        if (std::abs(ratio) >= 1.0) break;
        term *= ratio;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::log(sum);
}

} // namespace

LogMoments log_moments(double x)
{
    if (x < kSeriesThreshold) {
        const double t = -x;
        const double log_pdf = -0.5 * t * t - kLogSqrt2Pi;
        return {log_pdf + log_laplace_moment(0, t), log_pdf + log_laplace_moment(1, t),
                log_pdf + log_laplace_moment(2, t)};
    }
    const double cdf = 0.5 * std::erfc(-x / std::numbers::sqrt2);
    const double pdf = std::exp(-0.5 * x * x - kLogSqrt2Pi);
    const double first = pdf + x * cdf;
    const double second = (1.0 + x * x) * cdf + x * pdf;
    return {std::log(cdf), std::log(first), std::log(second)};
}

double gauss_d(double x) { return std::exp(log_moments(x).log_second); }

double log_gauss_d(double x) { return log_moments(x).log_second; }

double gauss_f(double x)
{
    const LogMoments m = log_moments(x);
    return std::exp(m.log_first - 0.5 * m.log_second);
}

double gauss_g(double x)
{
    const LogMoments m = log_moments(x);
    return std::exp(m.log_phi_cdf - 0.5 * m.log_second);
}

double r_alpha(double alpha, double x)
{
    const double f = gauss_f(x);
    return alpha * f * f + 2.0 * gauss_g(x);
}

namespace {

// Bisection for an increasing-sign function (negative at lo, positive at hi).
template <class F>
double bisect(F&& fn, double lo, double hi, double tol)
{
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= tol || mid == lo || mid == hi) return mid;
        if (fn(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double solve_c(const EnsembleParams& params)
{
    params.validate();
    if (params.alpha == 0.0) return 0.0;
    const double ratio = params.alpha / params.kappa;
    const double bound = std::abs(ratio) + 1.0;
    return bisect([ratio](double x) { return x - ratio * gauss_f(x); }, -bound, bound, 1e-12);
}

FrontierPoint lambda_plus(const EnsembleParams& params)
{
    const double c = solve_c(params);
    const double f = gauss_f(c);
    return {params.alpha, params.kappa, params.alpha * f * f + 2.0 * params.kappa * gauss_g(c), c};
}

double inverse_f(double s)
{
    require(s > 0.0 && s < 1.0, "inverse_f: s must lie in (0, 1), got " + std::to_string(s));
    double lo = -1.0;
    double hi = 1.0;
    while (gauss_f(lo) >= s) lo *= 2.0;
    while (gauss_f(hi) <= s) {
        hi *= 2.0;
        if (hi > 1e12) throw ConvergenceError("inverse_f: s too close to 1");
    }
    return bisect([s](double x) { return gauss_f(x) - s; }, lo, hi, 1e-14);
}

FrontierPoint frontier_alpha(double kappa)
{
    require(std::isfinite(kappa) && kappa > 0.0, "frontier: kappa must be positive");
    constexpr double lo = -50.0;
    constexpr double hi = 50.0;
    auto excess = [kappa](double alpha) { return lambda_plus({kappa, alpha}).lambda_plus - 1.0; };
    if (!(excess(lo) < 0.0 && excess(hi) > 0.0))
        throw ConvergenceError("frontier: lambda_plus(alpha, " + std::to_string(kappa)
                               + ") - 1 has no sign change on [-50, 50]");
    const double alpha = bisect(excess, lo, hi, 1e-12);
    return lambda_plus({kappa, alpha});
}

std::vector<FrontierPoint> frontier_curve(std::span<const double> kappa_grid)
{
    std::vector<FrontierPoint> out;
    out.reserve(kappa_grid.size());
    for (double kappa : kappa_grid) {
        require(kappa > 0.0 && kappa <= std::numbers::sqrt2 / 2.0 + 1e-12,
                "frontier: kappa must lie in (0, 1/sqrt(2)], got " + std::to_string(kappa));
        out.push_back(frontier_alpha(kappa));
    }
    return out;
}

double sudakov_bound(double s, const EnsembleParams& params)
{
    params.validate();
    require(std::abs(params.kappa - 1.0) < 1e-12, "sudakov_bound is stated for kappa = 1");
    require(s > 0.0 && s < 1.0, "sudakov_bound: s must lie in (0, 1)");
    const double ct = inverse_f(s);
    return params.alpha * s * s - 2.0 * ct * s + 2.0 * std::exp(0.5 * log_gauss_d(ct));
}

} // namespace frontier
} // namespace lvsg
