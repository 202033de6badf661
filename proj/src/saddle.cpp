#include "lvsg/error.hpp"
#include "lvsg/frontier.hpp"
#include "lvsg/parisi.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lvsg::parisi {

namespace {

constexpr double lambda_gap = 1e-6;
constexpr int brent_bits = 26;

struct Bounds {
    double lo;
    double hi;
};

// Inner coordinates: b_1..b_{K-1}, lambda_0..lambda_{K-1}, gamma, [h].
struct InnerState {
    std::vector<double> lambdas;
    std::vector<double> atoms;
    double gamma = 0.0;
    double h = 0.0;
};

class InnerProblem {
public:
    InnerProblem(const Model& model, double a, double d, double h_outer, bool h_inner, const SaddleOptions& options)
        : model_(model), a_(a), d_(d), h_outer_(h_outer), h_inner_(h_inner), options_(options)
    {
    }

    double value(const InnerState& s)
    {
        ++evaluations_;
        Args args{a_, h_inner_ ? s.h : h_outer_, s.gamma, model_};
        const ParisiMeasure zeta(s.lambdas, s.atoms);
        return objective(zeta, args, RecursionOptions{options_.order, false});
    }

    int size(const InnerState& s) const
    {
        return static_cast<int>(s.atoms.size() - 2 + s.lambdas.size()) + 1 + (h_inner_ ? 1 : 0);
    }

    std::string name(const InnerState& s, int i) const
    {
        const int nb = static_cast<int>(s.atoms.size()) - 2;
        const int nl = static_cast<int>(s.lambdas.size());
        if (i < nb) return "b_" + std::to_string(i + 1);
        if (i < nb + nl) return "lambda_" + std::to_string(i - nb);
        if (i == nb + nl) return "gamma";
        return "h";
    }

    double& coord(InnerState& s, int i) const
    {
        const int nb = static_cast<int>(s.atoms.size()) - 2;
        const int nl = static_cast<int>(s.lambdas.size());
        if (i < nb) return s.atoms[static_cast<std::size_t>(i + 1)];
        if (i < nb + nl) return s.lambdas[static_cast<std::size_t>(i - nb)];
        if (i == nb + nl) return s.gamma;
        return s.h;
    }

    // Feasible interval for coordinate i with the others held fixed. gamma and h
    // get the current search bracket.
    Bounds bounds(const InnerState& s, int i, double gamma_bound, double h_bound) const
    {
        const int nb = static_cast<int>(s.atoms.size()) - 2;
        const int nl = static_cast<int>(s.lambdas.size());
        if (i < nb) {
            const double gap = 1e-9 * d_;
            const auto k = static_cast<std::size_t>(i + 1);
            return {s.atoms[k - 1] + gap, s.atoms[k + 1] - gap};
        }
        if (i < nb + nl) {
            const auto k = static_cast<std::size_t>(i - nb);
            const double lo = k == 0 ? 0.0 : s.lambdas[k - 1];
            const double hi = k + 1 == s.lambdas.size() ? 1.0 : s.lambdas[k + 1];
            return {lo + lambda_gap, hi - lambda_gap};
        }
        if (i == nb + nl) return {-gamma_bound, gamma_bound};
        return {0.0, h_bound};
    }

    bool is_unbounded(const InnerState& s, int i) const
    {
        const int nb = static_cast<int>(s.atoms.size()) - 2;
        const int nl = static_cast<int>(s.lambdas.size());
        return i >= nb + nl; // gamma (both ends), h (upper end)
    }

    long evaluations() const { return evaluations_; }
    double d() const { return d_; }

private:
    Model model_;
    double a_;
    double d_;
    double h_outer_;
    bool h_inner_;
    SaddleOptions options_;
    long evaluations_ = 0;
};

double brent_min(const std::function<double(double)>& f, Bounds b, double& fx)
{
    if (!(b.hi > b.lo)) {
        fx = f(b.lo);
        return b.lo;
    }
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::brent_find_minima(f, b.lo, b.hi, brent_bits, iters);
    fx = r.second;
    return r.first;
}

InnerState initial_state(int levels, double d)
{
    InnerState s;
    for (int k = 0; k < levels; ++k) s.lambdas.push_back((k + 1.0) / (levels + 1.0));
    for (int k = 0; k <= levels; ++k) s.atoms.push_back(d * k / levels);
    return s;
}

// Projected central-difference gradient of a function to be minimized (sign
// = +1) or maximized (sign = -1) inside [lo, hi].
double projected_residual(const std::function<double(double)>& f, double x, Bounds b, double sign)
{
    const double step = 1e-5 * std::max(1.0, std::abs(x));
    const double tol = 1e-7 * std::max(1.0, std::abs(x));
    const double xl = std::max(b.lo, x - step);
    const double xr = std::min(b.hi, x + step);
    if (!(xr > xl)) return 0.0;
    const double g = sign * (f(xr) - f(xl)) / (xr - xl);
    const bool at_lo = x - b.lo <= tol;
    const bool at_hi = b.hi - x <= tol;
    if (at_lo && g > 0.0) return 0.0;
    if (at_hi && g < 0.0) return 0.0;
    return std::abs(g);
}

} // namespace

InnerSolution inner_infimum(const Model& model, double a, double d, double h, const SaddleOptions& options,
                            const InnerSolution* warm_start)
{
    model.validate();
    require(a > 0.0 && d > 0.0, "inner infimum: a and D must be positive");
    require(options.levels >= 1, "inner infimum: K must be >= 1");
    const bool h_inner = model.alpha < 0.0;
    InnerProblem problem(model, a, d, h, h_inner, options);

    InnerState s = initial_state(options.levels, d);
    if (warm_start && static_cast<int>(warm_start->lambdas.size()) == options.levels) {
        s.lambdas = warm_start->lambdas;
        // keep the relative atom positions
        const double old_d = warm_start->atoms.back();
        for (std::size_t k = 0; k < s.atoms.size(); ++k) s.atoms[k] = warm_start->atoms[k] / old_d * d;
        s.atoms.back() = d;
        s.gamma = warm_start->gamma;
        s.h = warm_start->h;
    }
    if (!h_inner) s.h = 0.0;

    double gamma_bound = options.gamma_bound;
    double h_bound = 2.0 * std::sqrt(d) + 1.0;
    const int n = problem.size(s);
    double current = problem.value(s);
    for (int sweep = 0; sweep < options.inner_sweeps; ++sweep) {
        const double before = current;
        for (int i = 0; i < n; ++i) {
            for (int attempt = 0; attempt < 8; ++attempt) {
                const Bounds b = problem.bounds(s, i, gamma_bound, h_bound);
                const double saved = problem.coord(s, i);
                auto f = [&](double x) {
                    problem.coord(s, i) = x;
                    return problem.value(s);
                };
                double fx = 0.0;
                const double x = brent_min(f, b, fx);
                if (fx <= current) {
                    problem.coord(s, i) = x;
                    current = fx;
                } else {
                    problem.coord(s, i) = saved;
                }
                // widen an unbounded coordinate whose minimizer sits on the bracket edge
                if (!problem.is_unbounded(s, i)) break;
                const double edge = 1e-6 * (b.hi - b.lo);
                const bool name_gamma = problem.name(s, i) == "gamma";
                const bool hit = (name_gamma && (x - b.lo < edge || b.hi - x < edge)) || (!name_gamma && b.hi - x < edge);
                if (!hit) break;
                if (name_gamma)
                    gamma_bound *= 4.0;
                else
                    h_bound *= 4.0;
            }
        }
        if (std::abs(before - current) <= options.inner_tolerance * (1.0 + std::abs(current))) break;
    }

    InnerSolution out;
    out.value = current;
    out.lambdas = s.lambdas;
    out.atoms = s.atoms;
    out.gamma = s.gamma;
    out.h = h_inner ? s.h : h;
    for (int i = 0; i < n; ++i) {
        const Bounds b = problem.bounds(s, i, std::numeric_limits<double>::infinity(),
                                        std::numeric_limits<double>::infinity());
        const double saved = problem.coord(s, i);
        auto f = [&](double x) {
            problem.coord(s, i) = x;
            return problem.value(s);
        };
        out.residuals.push_back(projected_residual(f, saved, b, 1.0));
        problem.coord(s, i) = saved;
    }
    out.evaluations = problem.evaluations();
    return out;
}

namespace {

// Outer coordinates live in the unit cube: t_a -> log a, t_d -> D, t_h -> h / sqrt(D).
struct Outer {
    const Model& model;
    const SaddleOptions& options;
    bool use_a;
    bool use_d;
    bool use_h;
    long evaluations = 0;
    InnerSolution last;
    bool have_last = false;

    int dims() const { return int(use_a) + int(use_d) + int(use_h); }

    void decode(const std::vector<double>& t, double& a, double& d, double& h) const
    {
        std::size_t i = 0;
        a = options.fixed_a ? *options.fixed_a : 0.0;
        d = options.fixed_d ? *options.fixed_d : 0.0;
        h = options.fixed_h ? *options.fixed_h : 0.0;
        const double la = std::log(options.a_min);
        const double lb = std::log(options.a_max);
        if (use_a) a = std::exp(la + std::clamp(t[i++], 0.0, 1.0) * (lb - la));
        if (use_d) d = options.d_min + std::clamp(t[i++], 0.0, 1.0) * (options.d_max - options.d_min);
        if (use_h) h = std::sqrt(d) * std::clamp(t[i++], 0.0, 1.0);
        if (model.alpha <= 0.0) h = 0.0;
    }

    InnerSolution solve(const std::vector<double>& t)
    {
        double a = 0.0;
        double d = 0.0;
        double h = 0.0;
        decode(t, a, d, h);
        InnerSolution s = inner_infimum(model, a, d, h, options, have_last ? &last : nullptr);
        evaluations += s.evaluations;
        last = s;
        have_last = true;
        return s;
    }

    double value(const std::vector<double>& t) { return solve(t).value; }
};

// Nelder-Mead maximization on the unit cube (points are clamped).
std::vector<double> nelder_mead_max(Outer& outer, std::vector<double> start, int budget)
{
    const std::size_t n = start.size();
    auto clamp = [](std::vector<double> v) {
        for (double& x : v) x = std::clamp(x, 0.0, 1.0);
        return v;
    };
    std::vector<std::vector<double>> pts{start};
    for (std::size_t i = 0; i < n; ++i) {
        auto p = start;
        p[i] += p[i] < 0.8 ? 0.15 : -0.15;
        pts.push_back(clamp(p));
    }
    std::vector<double> f;
    for (const auto& p : pts) f.push_back(-outer.value(p)); // minimize -F
    int used = static_cast<int>(pts.size());
    std::vector<std::size_t> order(pts.size());
    while (used < budget) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return f[x] < f[y]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[order.size() - 2];
        double spread = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) spread = std::max(spread, std::abs(pts[i][j] - pts[best][j]));
        if (std::abs(f[worst] - f[best]) < 1e-11 && spread < 1e-6) break;
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (i != worst)
                for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / static_cast<double>(n);
        auto along = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (pts[worst][j] - centroid[j]);
            return clamp(p);
        };
        const auto xr = along(-1.0);
        const double fr = -outer.value(xr);
        ++used;
        if (fr < f[best]) {
            const auto xe = along(-2.0);
            const double fe = -outer.value(xe);
            ++used;
            if (fe < fr) {
                pts[worst] = xe;
                f[worst] = fe;
            } else {
                pts[worst] = xr;
                f[worst] = fr;
            }
        } else if (fr < f[second]) {
            pts[worst] = xr;
            f[worst] = fr;
        } else {
            const auto xc = fr < f[worst] ? along(-0.5) : along(0.5);
            const double fc = -outer.value(xc);
            ++used;
            if (fc < std::min(fr, f[worst])) {
                pts[worst] = xc;
                f[worst] = fc;
            } else {
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
                    f[i] = -outer.value(pts[i]);
                    ++used;
                }
            }
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
    return pts[best];
}

} // namespace

SaddleResult saddle_search(const Model& model, const SaddleOptions& options)
{
    model.validate();
    require(options.levels >= 1, "saddle search: K must be >= 1");
    require(options.a_min > 0.0 && options.a_max > options.a_min, "saddle search: bad a box");
    require(options.d_min > 0.0 && options.d_max > options.d_min, "saddle search: bad D box");
    if (options.fixed_a) require(*options.fixed_a > 0.0, "saddle search: fixed a must be positive");
    if (options.fixed_d) require(*options.fixed_d > 0.0, "saddle search: fixed D must be positive");
    if (options.fixed_h) require(*options.fixed_h >= 0.0, "saddle search: fixed h must be nonnegative");
    {
        double lp = std::max(model.alpha, 0.0);
        if (model.kappa > 0.0) lp = frontier::lambda_plus(EnsembleParams{model.kappa, model.alpha}).lambda_plus;
        require(lp < 1.0, "saddle search: needs lambda_+(alpha, kappa) < 1");
    }

    Outer outer{model, options, !options.fixed_a.has_value(), !options.fixed_d.has_value(),
                model.alpha > 0.0 && !options.fixed_h.has_value(), 0, {}, false};

    std::vector<double> t;
    if (outer.use_a) t.push_back(0.75);
    if (outer.use_d) {
        // start near the decoupled second moment
        const double power = model.phi * model.beta - 1.0;
        const quad::Rule r = quad::exponential_quadratic_rule(options.a_max, power, -0.5 * model.beta, model.beta,
                                                              model.beta);
        const double lz = quad::log_integrate(r, [&](double x) { return -0.5 * model.beta * x * x + model.beta * x; });
        const double l2 = quad::log_integrate(
            r, [&](double x) { return -0.5 * model.beta * x * x + model.beta * x + 2.0 * std::log(x); });
        const double d0 = std::clamp(std::exp(l2 - lz), options.d_min, options.d_max);
        t.push_back((d0 - options.d_min) / (options.d_max - options.d_min));
    }
    if (outer.use_h) t.push_back(0.5);

    if (!t.empty()) {
        t = nelder_mead_max(outer, t, options.outer_evaluations);
        // coordinate polishing with Brent
        for (int sweep = 0; sweep < options.polish_sweeps; ++sweep) {
            double moved = 0.0;
            for (std::size_t i = 0; i < t.size(); ++i) {
                auto f = [&](double x) {
                    auto p = t;
                    p[i] = x;
                    return -outer.value(p);
                };
                const double lo = std::max(0.0, t[i] - 0.05);
                const double hi = std::min(1.0, t[i] + 0.05);
                std::uintmax_t iters = 60;
                const auto r = boost::math::tools::brent_find_minima(f, lo, hi, brent_bits, iters);
                if (r.second <= f(t[i])) {
                    moved = std::max(moved, std::abs(r.first - t[i]));
                    t[i] = r.first;
                }
            }
            if (moved < 1e-8) break;
        }
    }

    SaddleResult out;
    {
        double a = 0.0;
        double d = 0.0;
        double h = 0.0;
        outer.decode(t, a, d, h);
        out.a = a;
        out.d = d;
        out.inner = inner_infimum(model, a, d, h, options, outer.have_last ? &outer.last : nullptr);
        outer.evaluations += out.inner.evaluations;
        out.value = out.inner.value;

        // outer first-order conditions at the inner minimizer (envelope theorem)
        const InnerSolution& in = out.inner;
        auto obj = [&](double aa, double dd, double hh) {
            std::vector<double> atoms = in.atoms;
            for (double& b : atoms) b *= dd / d;
            Args args{aa, hh, in.gamma, model};
            return objective(ParisiMeasure(in.lambdas, atoms), args, RecursionOptions{options.order, false});
        };
        if (outer.use_a) {
            out.residual_names.push_back("a");
            out.residuals.push_back(
                projected_residual([&](double x) { return obj(x, d, in.h); }, a, {options.a_min, options.a_max}, -1.0));
        }
        if (outer.use_d) {
            out.residual_names.push_back("D");
            out.residuals.push_back(
                projected_residual([&](double x) { return obj(a, x, in.h); }, d, {options.d_min, options.d_max}, -1.0));
        }
        if (outer.use_h) {
            out.residual_names.push_back("h");
            out.residuals.push_back(
                projected_residual([&](double x) { return obj(a, d, x); }, in.h, {0.0, std::sqrt(d)}, -1.0));
        }
        InnerProblem names(model, a, d, h, model.alpha < 0.0, options);
        InnerState st{in.lambdas, in.atoms, in.gamma, in.h};
        for (std::size_t i = 0; i < in.residuals.size(); ++i) {
            out.residual_names.push_back(names.name(st, static_cast<int>(i)));
            out.residuals.push_back(in.residuals[i]);
        }
    }
    out.max_residual = 0.0;
    for (double r : out.residuals) out.max_residual = std::max(out.max_residual, r);
    out.converged = out.max_residual <= options.residual_tolerance;
    out.evaluations = outer.evaluations;
    return out;
}

} // namespace lvsg::parisi
