#include "lvsg/parisi.hpp"

#include "lvsg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lvsg::parisi {

void Model::validate() const
{
    require(std::isfinite(beta) && beta > 0.0, "parisi model: beta must be positive");
    require(std::isfinite(kappa) && kappa >= 0.0, "parisi model: kappa must be nonnegative");
    require(std::isfinite(alpha), "parisi model: alpha must be finite");
    require(std::isfinite(phi) && phi * beta > 1.0, "parisi model: needs phi beta > 1");
}

ParisiMeasure::ParisiMeasure(std::vector<double> lambdas, std::vector<double> atoms)
    : lambdas_(std::move(lambdas)), atoms_(std::move(atoms))
{
    require(!lambdas_.empty(), "parisi measure: need at least one level");
    require(atoms_.size() == lambdas_.size() + 1, "parisi measure: need K + 1 atoms for K lambdas");
    double prev = 0.0;
    for (double l : lambdas_) {
        require(std::isfinite(l) && l > prev && l < 1.0, "parisi measure: lambdas must increase strictly inside (0, 1)");
        prev = l;
    }
    require(atoms_.front() == 0.0, "parisi measure: first atom must be 0");
    for (std::size_t k = 1; k < atoms_.size(); ++k)
        require(std::isfinite(atoms_[k]) && atoms_[k] >= atoms_[k - 1], "parisi measure: atoms must not decrease");
    require(atoms_.back() > 0.0, "parisi measure: max support D must be positive");
}

std::vector<double> ParisiMeasure::weights() const
{
    std::vector<double> w(atoms_.size());
    double prev = 0.0;
    for (std::size_t k = 0; k < lambdas_.size(); ++k) {
        w[k] = lambdas_[k] - prev;
        prev = lambdas_[k];
    }
    w.back() = 1.0 - prev;
    return w;
}

bool ParisiMeasure::is_strict() const
{
    for (std::size_t k = 1; k < atoms_.size(); ++k)
        if (!(atoms_[k] > atoms_[k - 1])) return false;
    return true;
}

void Args::validate() const
{
    require(std::isfinite(a) && a > 0.0, "parisi args: a must be positive");
    require(std::isfinite(h) && h >= 0.0, "parisi args: h must be nonnegative");
    require(std::isfinite(gamma), "parisi args: gamma must be finite");
    model.validate();
}

LeafIntegral::LeafIntegral(const Args& args, double u_lo, double u_hi)
{
    const Model& m = args.model;
    const double power = m.phi * m.beta - 1.0;
    const double quad = args.gamma - 0.5 * m.beta;
    const double lin = m.beta + m.beta * m.alpha * args.h;
    const quad::Rule rule = quad::exponential_quadratic_rule(args.a, power, quad, lin + u_lo, lin + u_hi);
    nodes_ = rule.nodes;
    base_.resize(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double x = rule.nodes[j];
        base_[j] = rule.log_weights[j] + quad * x * x + lin * x;
    }
}

double LeafIntegral::operator()(double u) const
{
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nodes_.size(); ++j) m = std::max(m, base_[j] + u * nodes_[j]);
    double s = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) s += std::exp(base_[j] + u * nodes_[j] - m);
    return m + std::log(s);
}

namespace {

// level scale factors beta kappa sqrt(b_k - b_{k-1}), k = 1..K
std::vector<double> level_scales(const ParisiMeasure& zeta, const Model& m)
{
    const auto& b = zeta.atoms();
    std::vector<double> s(b.size() - 1);
    for (std::size_t k = 1; k < b.size(); ++k) s[k - 1] = m.beta * m.kappa * std::sqrt(b[k] - b[k - 1]);
    return s;
}

double max_node(const quad::Rule& gh)
{
    double z = 0.0;
    for (double x : gh.nodes) z = std::max(z, std::abs(x));
    return z;
}

// (1/lambda) log sum_q w_q exp(lambda v_q)
double soft_level(const quad::Rule& gh, double lambda, const std::vector<double>& v)
{
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < v.size(); ++q) m = std::max(m, gh.log_weights[q] + lambda * v[q]);
    double s = 0.0;
    for (std::size_t q = 0; q < v.size(); ++q) s += std::exp(gh.log_weights[q] + lambda * v[q] - m);
    return (m + std::log(s)) / lambda;
}

double tensor_x0(const ParisiMeasure& zeta, const std::vector<double>& scales, const LeafIntegral& leaf,
                 const quad::Rule& gh)
{
    const int K = zeta.levels();
    const auto& lambdas = zeta.lambdas();
    std::vector<std::vector<double>> scratch(static_cast<std::size_t>(K), std::vector<double>(gh.size()));
    auto level = [&](auto&& self, int k, double s) -> double {
        if (k == K) return leaf(s);
        const double sig = scales[static_cast<std::size_t>(k)];
        if (sig == 0.0) return self(self, k + 1, s);
        auto& v = scratch[static_cast<std::size_t>(k)];
        for (std::size_t q = 0; q < gh.size(); ++q) v[q] = self(self, k + 1, s + sig * gh.nodes[q]);
        return soft_level(gh, lambdas[static_cast<std::size_t>(k)], v);
    };
    return level(level, 0, 0.0);
}

// Values at Chebyshev-Lobatto points on [lo, hi]; barycentric evaluation.
struct ChebFn {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> x;
    std::vector<double> f;

    static std::vector<double> points(double lo, double hi, int degree)
    {
        std::vector<double> p(static_cast<std::size_t>(degree + 1));
        for (int j = 0; j <= degree; ++j)
            p[static_cast<std::size_t>(j)] =
                0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(std::numbers::pi * j / degree);
        return p;
    }

    double operator()(double s) const
    {
        if (x.size() == 1) return f[0];
        double num = 0.0;
        double den = 0.0;
        const std::size_t n = x.size() - 1;
        for (std::size_t j = 0; j <= n; ++j) {
            const double d = s - x[j];
            if (d == 0.0) return f[j];
            double w = (j % 2 == 0) ? 1.0 : -1.0;
            if (j == 0 || j == n) w *= 0.5;
            num += w * f[j] / d;
            den += w / d;
        }
        return num / den;
    }
};

// Level functions X_k(s) of the partial sum s = sum_{j<=k} scale_j z_j carried
// on Chebyshev grids; the leaf is evaluated exactly at the last level.
double chebyshev_x0(const ParisiMeasure& zeta, const std::vector<double>& scales, const LeafIntegral& leaf,
                    const quad::Rule& gh, double zmax)
{
    constexpr int degree = 120;
    const int K = zeta.levels();
    const auto& lambdas = zeta.lambdas();
    std::vector<double> range(static_cast<std::size_t>(K + 1), 0.0);
    for (int k = 1; k <= K; ++k)
        range[static_cast<std::size_t>(k)] = range[static_cast<std::size_t>(k - 1)] + zmax * scales[static_cast<std::size_t>(k - 1)];

    ChebFn next;
    bool next_is_leaf = true;
    auto eval_next = [&](double s) { return next_is_leaf ? leaf(s) : next(s); };
    std::vector<double> v(gh.size());
    for (int k = K - 1; k >= 0; --k) {
        const double sig = scales[static_cast<std::size_t>(k)];
        if (sig == 0.0) continue; // X_k = X_{k+1}
        const double r = range[static_cast<std::size_t>(k)];
        ChebFn cur;
        cur.lo = -r;
        cur.hi = r;
        cur.x = r > 0.0 ? ChebFn::points(-r, r, degree) : std::vector<double>{0.0};
        cur.f.resize(cur.x.size());
        for (std::size_t i = 0; i < cur.x.size(); ++i) {
            for (std::size_t q = 0; q < gh.size(); ++q) v[q] = eval_next(cur.x[i] + sig * gh.nodes[q]);
            cur.f[i] = soft_level(gh, lambdas[static_cast<std::size_t>(k)], v);
        }
        next = std::move(cur);
        next_is_leaf = false;
    }
    return eval_next(0.0);
}

double x0_with_order(const ParisiMeasure& zeta, const Args& args, int order)
{
    const quad::Rule gh = quad::gauss_hermite(order);
    const double zmax = max_node(gh);
    const std::vector<double> scales = level_scales(zeta, args.model);
    double total = 0.0;
    for (double s : scales) total += s;
    const LeafIntegral leaf(args, -zmax * total, zmax * total);
    if (zeta.levels() <= 3) return tensor_x0(zeta, scales, leaf, gh);
    return chebyshev_x0(zeta, scales, leaf, gh, zmax);
}

} // namespace

double x_leaf(const Args& args, std::span<const double> z, const ParisiMeasure& zeta)
{
    args.validate();
    require(static_cast<int>(z.size()) == zeta.levels(), "x_leaf: need one Gaussian per level");
    const std::vector<double> scales = level_scales(zeta, args.model);
    double u = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) u += scales[k] * z[k];
    return LeafIntegral(args, u, u)(u);
}

RecursionResult recursion_x0(const ParisiMeasure& zeta, const Args& args, const RecursionOptions& options)
{
    args.validate();
    require(options.order >= 2, "recursion: Gauss-Hermite order must be >= 2");
    RecursionResult out{x0_with_order(zeta, args, options.order), std::nullopt, false};
    if (options.check_doubling) {
        const double fine = x0_with_order(zeta, args, 2 * options.order);
        out.doubling_change = std::abs(fine - out.value);
        out.flagged = *out.doubling_change > options.doubling_tolerance;
    }
    return out;
}

double nested_recursion(std::span<const double> lambdas, const std::function<double(std::span<const double>)>& leaf,
                        int order)
{
    const std::size_t K = lambdas.size();
    require(K >= 1, "nested recursion: need at least one level");
    const quad::Rule gh = quad::gauss_hermite(order);
    std::vector<double> z(K);
    std::vector<std::vector<double>> scratch(K, std::vector<double>(gh.size()));
    auto level = [&](auto&& self, std::size_t k) -> double {
        if (k == K) return leaf(z);
        auto& v = scratch[k];
        for (std::size_t q = 0; q < gh.size(); ++q) {
            z[k] = gh.nodes[q];
            v[q] = self(self, k + 1);
        }
        return soft_level(gh, lambdas[k], v);
    };
    return level(level, 0);
}

double correction_sum_form(const ParisiMeasure& zeta, const Model& model)
{
    const auto& b = zeta.atoms();
    const auto& l = zeta.lambdas();
    double s = 0.0;
    for (std::size_t k = 0; k < l.size(); ++k) s += l[k] * (b[k + 1] * b[k + 1] - b[k] * b[k]);
    return 0.25 * model.beta * model.beta * model.kappa * model.kappa * s;
}

double correction_theta_form(const ParisiMeasure& zeta, const Model& model)
{
    const CovarianceFns cov{model.beta, model.kappa};
    const auto w = zeta.weights();
    const auto& b = zeta.atoms();
    double integral = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) integral += w[k] * cov.theta(b[k]);
    return -0.5 * integral + 0.5 * cov.theta(zeta.max_support());
}

double parisi_value(const ParisiMeasure& zeta, const Args& args, const RecursionOptions& options)
{
    return recursion_x0(zeta, args, options).value - correction_sum_form(zeta, args.model);
}

double objective(const ParisiMeasure& zeta, const Args& args, const RecursionOptions& options)
{
    return parisi_value(zeta, args, options) - args.gamma * zeta.max_support()
           - 0.5 * args.model.beta * args.model.alpha * args.h * args.h;
}

} // namespace lvsg::parisi
