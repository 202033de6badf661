#include "lvsg/randmat.hpp"

#include "lvsg/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace lvsg {

InteractionMatrix InteractionMatrix::deformed_goe(int n, const EnsembleParams& ensemble, std::uint64_t seed)
{
    require(n >= 1, "matrix size must be >= 1");
    ensemble.validate();
    InteractionMatrix m;
    m.goe_ = randmat::sample_goe(n, seed);
    const double scale = ensemble.kappa / std::sqrt(static_cast<double>(n));
    const double shift = ensemble.alpha / n;
    m.entries_ = (scale * m.goe_).array() + shift;
    m.ensemble_ = ensemble;
    m.seed_ = seed;
    return m;
}

InteractionMatrix InteractionMatrix::from_entries(Eigen::MatrixXd entries)
{
    require(entries.rows() >= 1 && entries.rows() == entries.cols(), "interaction matrix must be square");
    require(entries.allFinite(), "interaction matrix entries must be finite");
    randmat::require_symmetric(entries);
    InteractionMatrix m;
    m.entries_ = std::move(entries);
    return m;
}

InteractionMatrix InteractionMatrix::zero(int n)
{
    require(n >= 1, "matrix size must be >= 1");
    return from_entries(Eigen::MatrixXd::Zero(n, n));
}

InteractionMatrix InteractionMatrix::zeroed() const
{
    InteractionMatrix m = *this;
    m.entries_.setZero();
    return m;
}

namespace randmat {

void require_symmetric(const Eigen::MatrixXd& a, double tol)
{
    require(a.rows() == a.cols(), "matrix must be square");
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    require(asym <= tol, "matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
}

Eigen::MatrixXd sample_goe(int n, std::uint64_t seed)
{
    require(n >= 1, "GOE size must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = normal(rng);
    Eigen::MatrixXd w(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i <= j; ++i) {
            const double v = (m(i, j) + m(j, i)) / std::numbers::sqrt2;
            w(i, j) = v;
            w(j, i) = v;
        }
    }
    return w;
}

double kkt_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& u)
{
    const Eigen::VectorXd au = a * u;
    double worst = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (u(i) == 0.0) worst = std::max(worst, au(i));
    return worst;
}

namespace {

// Flip so the largest-magnitude entry is positive; zero entries that are
// negative within round-off. Returns false if a materially negative entry remains.
bool make_nonnegative(Eigen::VectorXd& v, double tol)
{
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    if (v.minCoeff() < -tol) return false;
    v = v.cwiseMax(0.0);
    const double nrm = v.norm();
    if (nrm == 0.0) return false;
    v /= nrm;
    return true;
}

std::vector<Eigen::Index> support_of(const Eigen::VectorXd& u)
{
    std::vector<Eigen::Index> s;
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (u(i) > 0.0) s.push_back(i);
    return s;
}

Eigen::MatrixXd principal(const Eigen::MatrixXd& a, const std::vector<Eigen::Index>& idx)
{
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < k; ++i) sub(i, j) = a(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    return sub;
}

constexpr double kSignTol = 1e-12;
constexpr double kKktTol = 1e-10;

} // namespace

PositiveMax lambda_plus_max_exact(const Eigen::MatrixXd& a)
{
    require_symmetric(a);
    const auto n = a.rows();
    require(n >= 1 && n <= 20, "exact lambda_plus_max requires 1 <= n <= 20");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());

    PositiveMax best;
    best.value = -std::numeric_limits<double>::infinity();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    std::vector<Eigen::Index> idx;
    const std::uint32_t subsets = 1u << n;
    for (std::uint32_t mask = 1; mask < subsets; ++mask) {
        idx.clear();
        for (Eigen::Index i = 0; i < n; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        solver.compute(principal(a, idx));
        for (Eigen::Index j = solver.eigenvalues().size() - 1; j >= 0; --j) {
            const double lam = solver.eigenvalues()(j);
            if (lam <= best.value) break; // eigenvalues ascend
            Eigen::VectorXd v = solver.eigenvectors().col(j);
            if (!make_nonnegative(v, kSignTol)) continue;
            Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
            for (std::size_t i = 0; i < idx.size(); ++i) u(idx[i]) = v(static_cast<Eigen::Index>(i));
            if (kkt_residual(a, u) > kKktTol * scale) continue;
            const double value = u.dot(a * u);
            if (value > best.value) {
                best.value = value;
                best.maximizer = u;
            }
        }
    }
    best.iterations = subsets - 1;
    return best;
}

double operator_norm(const Eigen::MatrixXd& a)
{
    const auto n = a.rows();
    require(n >= 1 && a.cols() == n, "operator_norm: matrix must be square");
    if (n <= 300) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
        return std::max(std::abs(solver.eigenvalues()(0)), std::abs(solver.eigenvalues()(n - 1)));
    }
    // Lanczos with full reorthogonalization; extreme Ritz values converge first.
    const Eigen::Index max_steps = std::min<Eigen::Index>(n, 400);
    Eigen::MatrixXd basis(n, max_steps);
    std::vector<double> diag;
    std::vector<double> off;
    std::mt19937_64 rng(0x1a2c05);
    std::normal_distribution<double> normal;
    Eigen::VectorXd q(n);
    for (Eigen::Index i = 0; i < n; ++i) q(i) = normal(rng);
    q.normalize();
    double previous = 0.0;
    double estimate = 0.0;
    for (Eigen::Index k = 0; k < max_steps; ++k) {
        basis.col(k) = q;
        Eigen::VectorXd w = a * q;
        const double alpha = q.dot(w);
        diag.push_back(alpha);
        for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
        const double beta = w.norm();
        const bool last = (k + 1 == max_steps) || beta < 1e-14;
        if ((k + 1) % 10 == 0 || last) {
            const auto m = static_cast<Eigen::Index>(diag.size());
            Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(diag.data(), m);
            Eigen::VectorXd e = off.empty() ? Eigen::VectorXd() : Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(off.data(), m - 1));
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
            if (m == 1) {
                estimate = std::abs(d(0));
            } else {
                tri.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
                estimate = std::max(std::abs(tri.eigenvalues()(0)), std::abs(tri.eigenvalues()(m - 1)));
            }
            if (last || std::abs(estimate - previous) <= 1e-13 * std::max(1.0, estimate)) return estimate;
            previous = estimate;
        }
        off.push_back(beta);
        q = w / beta;
    }
    return estimate;
}

namespace {

struct PowerRun {
    Eigen::VectorXd u;
    double value;
    long iterations;
    bool converged;
};

// Top eigenpair of a symmetric matrix; Lanczos (full reorthogonalization)
// seeded with `start` above a size where the dense solver gets expensive.
Eigen::VectorXd top_eigenvector(const Eigen::MatrixXd& m, const Eigen::VectorXd& start)
{
    const auto n = m.rows();
    if (n <= 80) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
        return solver.eigenvectors().col(n - 1);
    }
    const Eigen::Index max_steps = std::min<Eigen::Index>(n, 160);
    Eigen::MatrixXd basis(n, max_steps);
    std::vector<double> diag;
    std::vector<double> off;
    Eigen::VectorXd q = start / start.norm();
    double previous = std::numeric_limits<double>::quiet_NaN();
    Eigen::VectorXd ritz;
    for (Eigen::Index k = 0; k < max_steps; ++k) {
        basis.col(k) = q;
        Eigen::VectorXd w = m * q;
        diag.push_back(q.dot(w));
        for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
        const double beta = w.norm();
        const bool last = (k + 1 == max_steps) || beta < 1e-13;
        if ((k + 1) % 10 == 0 || last) {
            const auto size = static_cast<Eigen::Index>(diag.size());
            Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(diag.data(), size);
            Eigen::VectorXd e = Eigen::Map<Eigen::VectorXd>(off.data(), size - 1);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
            tri.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
            const double top = tri.eigenvalues()(size - 1);
            if (last || std::abs(top - previous) < 1e-14 * std::max(1.0, std::abs(top))) {
                tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
                ritz = basis.leftCols(size) * tri.eigenvectors().col(size - 1);
                return ritz;
            }
            previous = top;
        }
        off.push_back(beta);
        q = w / beta;
    }
    return ritz;
}

// Active-set refinement from the support of u: move toward the top eigenvector
// of A on the support, dropping coordinates that reach zero on the way; once
// the eigenvector itself is nonnegative, add coordinates outside the support
// whose gradient (A x)_i is positive, and repeat. Returns true and sets u when
// a nonnegative KKT point is found.
bool active_set_refine(const Eigen::MatrixXd& a, Eigen::VectorXd& u, int max_rounds)
{
    const auto n = a.rows();
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    Eigen::VectorXd x = u / u.norm();
    for (int round = 0; round < max_rounds; ++round) {
        const auto idx = support_of(x);
        if (idx.empty()) return false;
        Eigen::VectorXd xs(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i) xs(static_cast<Eigen::Index>(i)) = x(idx[i]);
        const Eigen::MatrixXd as = principal(a, idx);
        Eigen::VectorXd v = top_eigenvector(as, xs.cwiseMax(1e-3 * xs.maxCoeff()));
        if (v.dot(xs) < 0.0) v = -v;
        v *= xs.norm() / v.norm();
        // largest step along xs -> v that stays nonnegative; the quotient only
        // grows along this segment. Longer steps clipped at zero drop more
        // coordinates at once and are taken when their quotient is higher.
        double t_safe = 1.0;
        for (Eigen::Index i = 0; i < xs.size(); ++i)
            if (v(i) < 0.0) t_safe = std::min(t_safe, xs(i) / (xs(i) - v(i)));
        auto quotient = [&](const Eigen::VectorXd& y) { return y.dot(as * y) / y.squaredNorm(); };
        Eigen::VectorXd step = xs + t_safe * (v - xs);
        double best_q = quotient(step);
        for (double trial = 1.0; trial > t_safe; trial *= 0.5) {
            Eigen::VectorXd y = (xs + trial * (v - xs)).cwiseMax(0.0);
            const double q = quotient(y);
            if (q > best_q) {
                best_q = q;
                step = std::move(y);
            }
        }
        xs = std::move(step);
        const double peak = xs.maxCoeff();
        x.setZero();
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const double xi = xs(static_cast<Eigen::Index>(i));
            x(idx[i]) = xi > 1e-12 * peak ? xi : 0.0;
        }
        x /= x.norm();
        if (t_safe < 1.0) continue;
        const Eigen::VectorXd g = a * x;
        bool added = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (x(i) == 0.0 && g(i) > kKktTol * scale) {
                // enter with a small positive weight so the support includes it
                x(i) = 1e-9 * peak;
                added = true;
            }
        }
        if (!added) {
            u = x;
            return true;
        }
    }
    return false;
}

// Projected power iteration u <- normalize(((A + shift I) u)_+). Every few
// steps an active-set refinement is tried from the current support; the power
// steps alone converge slowly inside the support because the spectral gap
// there is small.
PowerRun projected_power(const Eigen::MatrixXd& a, double shift, Eigen::VectorXd u, double tol, long max_iterations)
{
    long jump_at = a.rows() > 40 ? 20 : max_iterations + 1;
    u /= u.norm();
    Eigen::VectorXd au = a * u;
    double value = u.dot(au);
    for (long it = 1; it <= max_iterations; ++it) {
        Eigen::VectorXd next = (au + shift * u).cwiseMax(0.0);
        const double nrm = next.norm();
        if (nrm == 0.0) return {u, value, it, true};
        next /= nrm;
        Eigen::VectorXd a_next = a * next;
        const double next_value = next.dot(a_next);
        const double gain = next_value - value;
        u = std::move(next);
        au = std::move(a_next);
        value = next_value;
        if (gain < tol) return {u, value, it, true};

        if (it == jump_at) {
            jump_at *= 2;
            Eigen::VectorXd cand = u;
            if (active_set_refine(a, cand, 200)) {
                const double cand_value = cand.dot(a * cand);
                // a KKT point at least as good: the power map leaves it fixed
                if (cand_value >= value) return {cand, cand_value, it, true};
            }
        }
    }
    return {u, value, max_iterations, false};
}

// Replace u by the top eigenvector of A restricted to supp(u) when that vector
// is a valid (nonnegative, KKT) point with at least the same quotient.
void polish(const Eigen::MatrixXd& a, PositiveMax& best)
{
    const double peak = best.maximizer.maxCoeff();
    Eigen::VectorXd trimmed = best.maximizer;
    for (Eigen::Index i = 0; i < trimmed.size(); ++i)
        if (trimmed(i) <= 1e-9 * peak) trimmed(i) = 0.0;
    const auto idx = support_of(trimmed);
    if (idx.empty()) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(principal(a, idx));
    Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(idx.size()) - 1);
    if (!make_nonnegative(v, kSignTol)) return;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(a.rows());
    for (std::size_t i = 0; i < idx.size(); ++i) u(idx[i]) = v(static_cast<Eigen::Index>(i));
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (kkt_residual(a, u) > kKktTol * scale) return;
    const double value = u.dot(a * u);
    if (value >= best.value - 1e-12) {
        best.value = value;
        best.maximizer = u;
    }
}

} // namespace

PositiveMax lambda_plus_max_heuristic(const Eigen::MatrixXd& a, const HeuristicOptions& options)
{
    require_symmetric(a);
    const auto n = a.rows();
    require(n >= 1, "heuristic lambda_plus_max requires n >= 1");
    const double shift = operator_norm(a) + 1.0;

    std::vector<Eigen::VectorXd> starts;
    starts.push_back(Eigen::VectorXd::Ones(n));
    Eigen::Index diag_arg = 0;
    a.diagonal().maxCoeff(&diag_arg);
    starts.push_back(Eigen::VectorXd::Unit(n, diag_arg));
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;
    for (int r = 0; r < options.random_restarts; ++r) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = std::abs(normal(rng));
        starts.push_back(std::move(v));
    }

    PositiveMax best;
    best.value = -std::numeric_limits<double>::infinity();
    bool all_converged = true;
    long total = 0;
    for (auto& s : starts) {
        PowerRun run = projected_power(a, shift, std::move(s), options.tolerance, options.max_iterations);
        total += run.iterations;
        all_converged = all_converged && run.converged;
        if (run.value > best.value) {
            best.value = run.value;
            best.maximizer = run.u;
        }
    }
    polish(a, best);
    best.converged = all_converged;
    best.iterations = total;
    return best;
}

double lambda_plus_max(const Eigen::MatrixXd& a)
{
    return a.rows() <= 20 ? lambda_plus_max_exact(a).value : lambda_plus_max_heuristic(a).value;
}

bool is_realizable(const Eigen::MatrixXd& a, double eps_sigma)
{
    require(eps_sigma > 0.0 && eps_sigma < 1.0, "eps_sigma must lie in (0, 1)");
    return lambda_plus_max(a) < 1.0 - eps_sigma;
}

InteractionMatrix truncate(const InteractionMatrix& sigma, double eps_sigma)
{
    return is_realizable(sigma.entries(), eps_sigma) ? sigma : sigma.zeroed();
}

} // namespace randmat
} // namespace lvsg
