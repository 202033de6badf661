#include "lvsg/quadrature.hpp"

#include "lvsg/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

namespace lvsg::quad {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights are
// mu0 times the squared first components of the normalized eigenvectors.
Rule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double log_mu0)
{
    const auto n = diag.size();
    Rule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.log_weights.resize(static_cast<std::size_t>(n));
    if (n == 1) {
        rule.nodes[0] = diag(0);
        rule.log_weights[0] = log_mu0;
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw ConvergenceError("Golub-Welsch eigensolve failed");
    for (Eigen::Index j = 0; j < n; ++j) {
        const double v0 = solver.eigenvectors()(0, j);
        rule.nodes[static_cast<std::size_t>(j)] = solver.eigenvalues()(j);
        rule.log_weights[static_cast<std::size_t>(j)] = log_mu0 + 2.0 * std::log(std::abs(v0));
    }
    return rule;
}

// Rules are requested with the same few parameters over and over by the
// composite builders; compute each once.
template <class Make>
Rule cached(int kind, int order, double a, double b, Make&& make)
{
    static std::mutex mutex;
    static std::map<std::tuple<int, int, double, double>, Rule> cache;
    const auto key = std::make_tuple(kind, order, a, b);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    Rule rule = make();
    std::lock_guard lock(mutex);
    if (cache.size() > 4096) cache.clear();
    cache.emplace(key, rule);
    return rule;
}

Rule make_hermite(int order)
{
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd off(std::max(order - 1, 0));
    for (int k = 1; k < order; ++k) off(k - 1) = std::sqrt(static_cast<double>(k));
    return golub_welsch(diag, off, 0.0);
}

Rule make_legendre(int order)
{
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd off(std::max(order - 1, 0));
    for (int k = 1; k < order; ++k) {
        const double kk = k;
        off(k - 1) = kk / std::sqrt(4.0 * kk * kk - 1.0);
    }
    return golub_welsch(diag, off, std::log(2.0));
}

Rule make_jacobi(int order, double a, double b)
{
    const double ab = a + b;
    Eigen::VectorXd diag(order);
    Eigen::VectorXd off(std::max(order - 1, 0));
    diag(0) = (b - a) / (ab + 2.0);
    for (int k = 1; k < order; ++k) {
        const double kk = k;
        const double s = 2.0 * kk + ab;
        diag(k) = (b * b - a * a) / (s * (s + 2.0));
        double num = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab);
        double den = s * s * (s + 1.0) * (s - 1.0);
        if (k == 1) {
            // (k + a + b) cancels (s - 1) when k = 1; keep it exact near a + b = -1
            num = 4.0 * (1.0 + a) * (1.0 + b);
            den = (2.0 + ab) * (2.0 + ab) * (3.0 + ab);
        }
        off(k - 1) = std::sqrt(num / den);
    }
    const double log_mu0 = (ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0)
                           - std::lgamma(ab + 2.0);
    return golub_welsch(diag, off, log_mu0);
}

} // namespace

Rule gauss_hermite(int order)
{
    require(order >= 1, "Gauss-Hermite order must be >= 1");
    return cached(0, order, 0.0, 0.0, [&] { return make_hermite(order); });
}

Rule gauss_legendre(int order)
{
    require(order >= 1, "Gauss-Legendre order must be >= 1");
    return cached(1, order, 0.0, 0.0, [&] { return make_legendre(order); });
}

Rule gauss_jacobi(int order, double a, double b)
{
    require(order >= 1, "Gauss-Jacobi order must be >= 1");
    require(a > -1.0 && b > -1.0, "Gauss-Jacobi exponents must exceed -1");
    return cached(2, order, a, b, [&] { return make_jacobi(order, a, b); });
}

namespace {

void append_legendre_panel(Rule& out, const Rule& gl, double lo, double hi, double power)
{
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    const double log_half = std::log(half);
    for (std::size_t j = 0; j < gl.size(); ++j) {
        const double x = mid + half * gl.nodes[j];
        out.nodes.push_back(x);
        out.log_weights.push_back(gl.log_weights[j] + log_half + power * std::log(x));
    }
}

void append_jacobi_panel(Rule& out, int order, double width, double power)
{
    const Rule gj = gauss_jacobi(order, 0.0, power);
    const double log_scale = (power + 1.0) * std::log(0.5 * width);
    for (std::size_t j = 0; j < gj.size(); ++j) {
        out.nodes.push_back(0.5 * width * (1.0 + gj.nodes[j]));
        out.log_weights.push_back(gj.log_weights[j] + log_scale);
    }
}

} // namespace

Rule power_weighted(double lo, double hi, double power, double panel_width, int order)
{
    require(hi > lo && lo >= 0.0, "power_weighted: need 0 <= lo < hi");
    require(panel_width > 0.0, "power_weighted: panel width must be positive");
    const auto panels = static_cast<int>(std::ceil((hi - lo) / panel_width - 1e-12));
    const double width = (hi - lo) / std::max(panels, 1);
    const Rule gl = gauss_legendre(order);
    Rule out;
    out.nodes.reserve(static_cast<std::size_t>(panels * order));
    out.log_weights.reserve(static_cast<std::size_t>(panels * order));
    for (int i = 0; i < std::max(panels, 1); ++i) {
        const double a = lo + i * width;
        const double b = (i + 1 == panels) ? hi : a + width;
        if (a == 0.0 && power != 0.0)
            append_jacobi_panel(out, order, b, power);
        else
            append_legendre_panel(out, gl, a, b, power);
    }
    return out;
}

double log_sum_exp(std::span<const double> values)
{
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values) m = std::max(m, v);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double v : values) s += std::exp(v - m);
    return m + std::log(s);
}

double log_integrate(const Rule& rule, const std::function<double(double)>& log_f)
{
    std::vector<double> terms(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j) terms[j] = rule.log_weights[j] + log_f(rule.nodes[j]);
    return log_sum_exp(terms);
}

Interval significant_support(double hi, double power, double quad, double lin_lo, double lin_hi, double drop)
{
    require(hi > 0.0, "significant_support: upper limit must be positive");
    constexpr int grid = 3000;
    constexpr int probes = 7;
    const double dx = hi / grid;
    static const std::vector<double> log_index = [] {
        std::vector<double> v(grid);
        for (int i = 0; i < grid; ++i) v[static_cast<std::size_t>(i)] = std::log(i + 1.0);
        return v;
    }();
    const double log_dx = std::log(dx);
    double lo_idx = grid;
    double hi_idx = 0;
    std::vector<double> ell(grid);
    for (int p = 0; p < probes; ++p) {
        const double lin = lin_lo + (lin_hi - lin_lo) * p / (probes - 1);
        double m = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < grid; ++i) {
            const double x = (i + 1) * dx;
            ell[static_cast<std::size_t>(i)] =
                power * (log_index[static_cast<std::size_t>(i)] + log_dx) + quad * x * x + lin * x;
            m = std::max(m, ell[static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < grid; ++i) {
            if (ell[static_cast<std::size_t>(i)] >= m - drop) {
                lo_idx = std::min<double>(lo_idx, i);
                hi_idx = std::max<double>(hi_idx, i);
            }
        }
    }
    // one grid cell of slack on each side; the grid point index i sits at (i+1)dx
    Interval out{std::max(0.0, lo_idx * dx - dx), std::min(hi, (hi_idx + 2) * dx)};
    if (out.lo <= 2.0 * dx) out.lo = 0.0;
    return out;
}

Rule exponential_quadratic_rule(double hi, double power, double quad, double lin_lo, double lin_hi, int order)
{
    const Interval support = significant_support(hi, power, quad, lin_lo, lin_hi);
    const double lin_abs = std::max(std::abs(lin_lo), std::abs(lin_hi));
    // log-integrand change allowed across one panel
    constexpr double budget = 10.0;
    constexpr int max_panels = 50000;

    auto slope = [&](double x) { return 2.0 * std::abs(quad) * x + lin_abs + 1e-3; };

    const Rule gl = gauss_legendre(order);
    Rule out;
    double x = support.lo;
    const double length = support.hi - support.lo;
    int panels = 0;
    if (x == 0.0) {
        double w = budget / slope(0.0);
        w = std::min(budget / slope(std::min(support.hi, w)), length);
        append_jacobi_panel(out, order, w, power);
        x = w;
        ++panels;
    }
    while (x < support.hi * (1.0 - 1e-15)) {
        double w = budget / (slope(x) + (x > 0.0 ? power / x : 0.0));
        w = budget / (slope(std::min(support.hi, x + w)) + (x > 0.0 ? power / x : 0.0));
        // the x^p branch point sits at distance x from the panel start
        w = std::min(w, x > 0.0 ? x : w);
        w = std::max(w, length * 1e-7);
        const double b = std::min(support.hi, x + w);
        append_legendre_panel(out, gl, x, b, power);
        x = b;
        if (++panels > max_panels) throw ConvergenceError("quadrature rule: panel budget exceeded");
    }
    return out;
}

} // namespace lvsg::quad
