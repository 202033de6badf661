#include "lvsg/gibbs.hpp"

#include "lvsg/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace lvsg::gibbs {

double hamiltonian(const Eigen::VectorXd& x, const ModelParams& params)
{
    require(x.size() == params.n(), "hamiltonian: x has the wrong dimension");
    require((x.array() > 0.0).all(), "hamiltonian: x must be entrywise positive");
    require(params.phi > params.temperature, "hamiltonian: needs phi > T");
    const Eigen::MatrixXd& sigma = params.sigma.entries();
    return 0.5 * x.dot(sigma * x) - 0.5 * x.squaredNorm() + x.sum()
           + (params.phi - params.temperature) * x.array().log().sum();
}

double interaction_energy(const Eigen::VectorXd& x, const ModelParams& params)
{
    return 0.5 * params.beta() * x.dot(params.sigma.entries() * x);
}

double BaseMeasure::log_density(double x) const
{
    return power() * std::log(x) - 0.5 * beta * x * x + beta * (1.0 + tilt) * x;
}

double BaseMeasure::density(double x) const { return std::exp(log_density(x)); }

namespace {

// A point beyond which exp(-beta x^2 / 2 + b x + p log x) is negligible.
double envelope_limit(double beta_eff, double lin, double power)
{
    const double peak = std::max(0.0, lin / beta_eff) + std::sqrt(std::max(power, 0.0) / beta_eff);
    return 2.0 * peak + 12.0 / std::sqrt(beta_eff) + 1.0;
}

} // namespace

quad::Rule BaseMeasure::rule(double upper) const
{
    require(power() > -1.0, "base measure: needs phi beta > 0");
    const double lin = beta * (1.0 + tilt);
    const double hi = std::min(upper, envelope_limit(beta, lin, power()));
    return quad::exponential_quadratic_rule(hi, power(), -0.5 * beta, lin, lin);
}

double BaseMeasure::log_mass(double upper) const
{
    const quad::Rule r = rule(upper);
    const double lin = beta * (1.0 + tilt);
    return quad::log_integrate(r, [&](double x) { return -0.5 * beta * x * x + lin * x; });
}

double BaseMeasure::mean(double upper) const
{
    const quad::Rule r = rule(upper);
    const double lin = beta * (1.0 + tilt);
    const double log_first = quad::log_integrate(r, [&](double x) { return std::log(x) - 0.5 * beta * x * x + lin * x; });
    return std::exp(log_first - log_mass(upper));
}

BaseMeasure mu_beta(const ModelParams& params)
{
    params.validate_gibbs();
    const double beta = params.beta();
    require(params.phi * beta > 1.0, "mu_beta needs phi beta > 1");
    return {beta, params.phi, 0.0};
}

double mu_beta_density(double x1, const ModelParams& params)
{
    require(x1 > 0.0, "mu_beta_density: x must be positive");
    return mu_beta(params).density(x1);
}

BaseMeasure external_field_measure(const ModelParams& params, double alpha, double h)
{
    BaseMeasure m = mu_beta(params);
    m.tilt = alpha * h;
    return m;
}

// ---------------------------------------------------------------------------

void GibbsTarget::validate() const
{
    params.validate_gibbs();
    require(params.phi * params.beta() > 1.0, "Gibbs target needs phi beta > 1");
    if (domain != Domain::orthant) require(domain_size > 0.0, "box/ball domain needs a positive size");
    if (external_field) {
        require(*external_field >= 0.0, "external field h must be >= 0");
        require(params.sigma.ensemble().has_value(), "external-field target needs a deformed-GOE interaction matrix");
    }
    if (domain == Domain::orthant) {
        const double lam = randmat::lambda_plus_max(quadratic_matrix());
        require(lam < 1.0, "Gibbs density is not normalizable on the orthant: lambda_plus_max = " + std::to_string(lam)
                               + " >= 1");
    }
}

BaseMeasure GibbsTarget::base() const
{
    BaseMeasure m{params.beta(), params.phi, 0.0};
    if (external_field) m.tilt = params.sigma.ensemble()->alpha * *external_field;
    return m;
}

Eigen::MatrixXd GibbsTarget::quadratic_matrix() const
{
    if (!external_field) return params.sigma.entries();
    const double kappa = params.sigma.ensemble()->kappa;
    return (kappa / std::sqrt(static_cast<double>(n()))) * params.sigma.goe();
}

double GibbsTarget::interaction(const Eigen::VectorXd& x) const
{
    if (!external_field) return interaction_energy(x, params);
    return 0.5 * params.beta() * x.dot(quadratic_matrix() * x);
}

bool GibbsTarget::contains(const Eigen::VectorXd& x) const
{
    switch (domain) {
    case Domain::orthant: return true;
    case Domain::box: return x.maxCoeff() <= domain_size;
    case Domain::ball: return x.squaredNorm() <= domain_size * domain_size * n();
    }
    return true;
}

double GibbsTarget::coordinate_limit() const
{
    const BaseMeasure b = base();
    const double lam = std::max(0.0, randmat::lambda_plus_max(quadratic_matrix()));
    double limit = std::numeric_limits<double>::infinity();
    if (lam < 1.0) {
        const double beta_eff = b.beta * (1.0 - lam);
        const double lin = b.beta * (1.0 + b.tilt);
        const double hi = envelope_limit(beta_eff, lin, b.power());
        limit = quad::significant_support(hi, b.power(), -0.5 * beta_eff, lin, lin, 50.0).hi;
    }
    if (domain == Domain::box) limit = std::min(limit, domain_size);
    if (domain == Domain::ball) limit = std::min(limit, domain_size * std::sqrt(static_cast<double>(n())));
    require(std::isfinite(limit), "Gibbs target has no finite integration range");
    return limit;
}

namespace {

struct TensorRule {
    quad::Rule axis;
    int n;
};

TensorRule tensor_rule(const GibbsTarget& target, const QuadratureOptions& options)
{
    target.validate();
    const int n = target.n();
    require(n >= 1 && n <= 3, "tensor quadrature supports n <= 3");
    const BaseMeasure b = target.base();
    const double limit = target.coordinate_limit();
    const Eigen::MatrixXd m = target.quadratic_matrix();
    const double row = m.cwiseAbs().rowwise().sum().maxCoeff();
    const double slope = b.beta * (limit * (1.0 + row) + std::abs(1.0 + b.tilt)) + 1e-3;
    return {quad::power_weighted(0.0, limit, b.power(), options.panel_budget / slope, options.order), n};
}

// Visit every tensor node with its log weight (base density included) and
// the log of the target density relative to the base product. The quadratic
// form is summed with scalars; at n = 3 this loop runs ~10^8 times.
template <class Visit>
void for_each_node(const GibbsTarget& target, const TensorRule& tr, Visit&& visit)
{
    const BaseMeasure b = target.base();
    const std::size_t m = tr.axis.size();
    const int n = tr.n;
    std::vector<double> log_base(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double x = tr.axis.nodes[j];
        // weights already carry x^p
        log_base[j] = tr.axis.log_weights[j] - 0.5 * b.beta * x * x + b.beta * (1.0 + b.tilt) * x;
    }
    const Eigen::MatrixXd q = 0.5 * b.beta * target.quadratic_matrix();
    const double box = target.domain == Domain::box ? target.domain_size : std::numeric_limits<double>::infinity();
    const double ball = target.domain == Domain::ball ? target.domain_size * target.domain_size * n
                                                      : std::numeric_limits<double>::infinity();
    const auto& nodes = tr.axis.nodes;

    Eigen::VectorXd x(n);
    std::array<double, 3> v{0, 0, 0};
    // level k fixes coordinates >= k; partial[k] holds weight and energy of those
    std::array<double, 4> lw{0, 0, 0, 0};
    std::array<double, 4> energy{0, 0, 0, 0};
    std::array<double, 4> norm2{0, 0, 0, 0};
    auto recurse = [&](auto&& self, int k) -> void {
        if (k < 0) {
            for (int i = 0; i < n; ++i) x(i) = v[static_cast<std::size_t>(i)];
            visit(x, lw[0] + energy[0]);
            return;
        }
        const auto ku = static_cast<std::size_t>(k);
        for (std::size_t j = 0; j < m; ++j) {
            const double xk = nodes[j];
            const double r2 = norm2[ku + 1] + xk * xk;
            if (xk > box || r2 > ball) continue;
            double e = q(k, k) * xk * xk;
            for (int i = k + 1; i < n; ++i) e += 2.0 * q(k, i) * xk * v[static_cast<std::size_t>(i)];
            v[ku] = xk;
            lw[ku] = lw[ku + 1] + log_base[j];
            energy[ku] = energy[ku + 1] + e;
            norm2[ku] = r2;
            self(self, k - 1);
        }
    };
    recurse(recurse, n - 1);
}

} // namespace

double quadrature_log_z(const GibbsTarget& target, const QuadratureOptions& options)
{
    const TensorRule tr = tensor_rule(target, options);
    double mx = -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for_each_node(target, tr, [&](const Eigen::VectorXd&, double lv) {
        if (lv > mx) {
            acc = acc * std::exp(mx - lv) + 1.0;
            mx = lv;
        } else {
            acc += std::exp(lv - mx);
        }
    });
    return mx + std::log(acc);
}

double quadrature_expectation(const GibbsTarget& target, const std::function<double(const Eigen::VectorXd&)>& fn,
                              const QuadratureOptions& options)
{
    const double log_z = quadrature_log_z(target, options);
    const TensorRule tr = tensor_rule(target, options);
    double sum = 0.0;
    for_each_node(target, tr, [&](const Eigen::VectorXd& x, double lv) { sum += std::exp(lv - log_z) * fn(x); });
    return sum;
}

// ---------------------------------------------------------------------------

double Bump::value(const Eigen::VectorXd& x) const
{
    const double s = 1.0 - ((x - center).array() / width.array()).square().sum();
    return s > 0.0 ? std::exp(1.0 - 1.0 / s) : 0.0;
}

Eigen::VectorXd Bump::gradient(const Eigen::VectorXd& x) const
{
    const Eigen::ArrayXd d = (x - center).array();
    const Eigen::ArrayXd w2 = width.array().square();
    const double s = 1.0 - (d.square() / w2).sum();
    if (s <= 0.0) return Eigen::VectorXd::Zero(x.size());
    const double f = std::exp(1.0 - 1.0 / s);
    const Eigen::ArrayXd ds = -2.0 * d / w2;
    return (f / (s * s) * ds).matrix();
}

Eigen::MatrixXd Bump::hessian(const Eigen::VectorXd& x) const
{
    const auto n = x.size();
    const Eigen::ArrayXd d = (x - center).array();
    const Eigen::ArrayXd w2 = width.array().square();
    const double s = 1.0 - (d.square() / w2).sum();
    if (s <= 0.0) return Eigen::MatrixXd::Zero(n, n);
    const double f = std::exp(1.0 - 1.0 / s);
    const Eigen::VectorXd ds = (-2.0 * d / w2).matrix();
    Eigen::MatrixXd h = f * (1.0 / (s * s * s * s) - 2.0 / (s * s * s)) * (ds * ds.transpose());
    for (Eigen::Index i = 0; i < n; ++i) h(i, i) += -2.0 * f / (w2(i) * s * s);
    return h;
}

double generator(const Bump& fn, const Eigen::VectorXd& x, const ModelParams& params)
{
    const Eigen::MatrixXd& sigma = params.sigma.entries();
    const Eigen::VectorXd drift = (x.array() * (1.0 + (sigma * x - x).array()) + params.phi).matrix();
    const Eigen::MatrixXd h = fn.hessian(x);
    return fn.gradient(x).dot(drift) + params.temperature * h.diagonal().dot(x);
}

double generator_residual(const Bump& fn, const GibbsTarget& target, int panels_per_dim, int order)
{
    require(target.domain == Domain::orthant && !target.external_field,
            "generator_residual is defined for the SDE's invariant measure on the orthant");
    const int n = target.n();
    require(n >= 1 && n <= 2, "generator_residual supports n <= 2");
    require(fn.center.size() == n && fn.width.size() == n, "bump dimension mismatch");
    require(((fn.center - fn.width).array() > 0.0).all(), "bump support must lie inside the open orthant");
    const double log_z = quadrature_log_z(target);

    const quad::Rule gl = quad::gauss_legendre(order);
    std::vector<quad::Rule> axes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        quad::Rule& ax = axes[static_cast<std::size_t>(i)];
        const double lo = fn.center(i) - fn.width(i);
        const double h = 2.0 * fn.width(i) / panels_per_dim;
        for (int p = 0; p < panels_per_dim; ++p) {
            const double a = lo + p * h;
            for (std::size_t j = 0; j < gl.size(); ++j) {
                ax.nodes.push_back(a + 0.5 * h * (1.0 + gl.nodes[j]));
                ax.log_weights.push_back(gl.log_weights[j] + std::log(0.5 * h));
            }
        }
    }
    const BaseMeasure b = target.base();
    auto log_density = [&](const Eigen::VectorXd& x) {
        double s = target.interaction(x);
        for (int i = 0; i < n; ++i) s += b.log_density(x(i));
        return s - log_z;
    };
    double total = 0.0;
    Eigen::VectorXd x(n);
    const std::size_t m = axes[0].size();
    if (n == 1) {
        for (std::size_t j = 0; j < m; ++j) {
            x(0) = axes[0].nodes[j];
            total += std::exp(axes[0].log_weights[j] + log_density(x)) * generator(fn, x, target.params);
        }
    } else {
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t k = 0; k < axes[1].size(); ++k) {
                x << axes[0].nodes[j], axes[1].nodes[k];
                const double lw = axes[0].log_weights[j] + axes[1].log_weights[k];
                total += std::exp(lw + log_density(x)) * generator(fn, x, target.params);
            }
        }
    }
    return total;
}

} // namespace lvsg::gibbs
