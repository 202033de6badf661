#pragma once

// Gauss rules (Golub-Welsch) and composite rules for integrals of the form
//   int_lo^hi x^p exp(s(x)) dx
// with s smooth. Weights are carried in log space so integrands with very
// large or very small magnitude can be summed with a running max.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lvsg::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> log_weights;

    std::size_t size() const { return nodes.size(); }
};

/// Probabilists' Gauss-Hermite rule: sum_j w_j f(z_j) ~ E f(Z), Z ~ N(0,1).
Rule gauss_hermite(int order);

/// Gauss-Legendre on [-1, 1].
Rule gauss_legendre(int order);

/// Gauss-Jacobi on [-1, 1] with weight (1 - t)^a (1 + t)^b, a, b > -1.
Rule gauss_jacobi(int order, double a, double b);

/// Composite rule for int_lo^hi x^p g(x) dx, g smooth. The x^p factor is folded
/// into the weights; when lo == 0 the first panel is Gauss-Jacobi so the
/// endpoint singularity is integrated exactly. Panels have width at most
/// `panel_width`.
Rule power_weighted(double lo, double hi, double power, double panel_width, int order = 24);

/// log(sum_j exp(v_j)), stable for any magnitudes. Returns -inf for empty input
/// or all -inf entries.
double log_sum_exp(std::span<const double> values);

/// log int f = log sum_j w_j exp(log_f(x_j)).
double log_integrate(const Rule& rule, const std::function<double(double)>& log_f);

/// Support of exp(p log x + quad x^2 + lin x) on [0, hi] where the log integrand
/// lies within `drop` of its maximum, for every linear coefficient in
/// [lin_lo, lin_hi]. Returns the hull [x_lo, x_hi].
struct Interval {
    double lo;
    double hi;
};
Interval significant_support(double hi, double power, double quad, double lin_lo, double lin_hi,
                             double drop = 46.0);

/// Rule for int_0^hi x^p exp(quad x^2 + lin x) dx that stays accurate for every
/// linear coefficient in [lin_lo, lin_hi]. The node layout depends only on the
/// arguments, never on which lin is later evaluated, so integrals built on it
/// are smooth in lin.
Rule exponential_quadratic_rule(double hi, double power, double quad, double lin_lo, double lin_hi,
                                int order = 24);

} // namespace lvsg::quad
