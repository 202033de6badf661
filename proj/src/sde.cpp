#include "lvsg/sde.hpp"

#include "lvsg/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lvsg::sde {

Observable observable_by_name(const std::string& name)
{
    if (name == "mean")
        return {name, [](const Eigen::Ref<const Eigen::VectorXd>& x) { return x.mean(); }};
    if (name == "second-moment")
        return {name, [](const Eigen::Ref<const Eigen::VectorXd>& x) { return x.squaredNorm() / x.size(); }};
    if (name == "logmean")
        return {name, [](const Eigen::Ref<const Eigen::VectorXd>& x) { return x.array().log().mean(); }};
    throw ValidationError("unknown observable '" + name + "' (expected mean, second-moment or logmean)");
}

Eigen::VectorXd step(const Eigen::VectorXd& x, double dt, const Eigen::VectorXd& dB, const ModelParams& params)
{
    const Eigen::MatrixXd& sigma = params.sigma.entries();
    // drift x o (1 + (Sigma - I) x) + phi, evaluated at the untruncated state
    const Eigen::VectorXd interaction = sigma * x - x;
    Eigen::VectorXd y = x.array() * (1.0 + interaction.array()) + params.phi;
    y *= dt;
    y += x;
    y.array() += (2.0 * params.temperature * x.array().max(0.0)).sqrt() * dB.array();
    return y.cwiseMax(0.0);
}

Trajectory simulate(const ModelParams& params, const SimulationOptions& options)
{
    params.validate();
    const int n = params.n();
    require(options.x0.size() == n, "x0 has the wrong dimension");
    require(options.x0.allFinite(), "x0 must be finite");
    require((options.x0.array() >= 0.0).all(), "x0 must be nonnegative");
    require(options.dt > 0.0 && options.dt <= 0.1, "dt must lie in (0, 0.1]");
    require(options.t_end >= 0.0 && std::isfinite(options.t_end), "t_end must be a nonnegative number");
    require(options.norm_cap > 0.0, "norm_cap must be positive");
    require(options.record_stride >= 1, "record_stride must be >= 1");

    Trajectory traj;
    traj.n_ = n;
    const std::size_t n_obs = options.observables.size();
    traj.accum_.assign(n_obs, {});
    for (const auto& o : options.observables) traj.names_.push_back(o.name);

    Eigen::VectorXd x = options.x0;
    std::vector<double> running(n_obs, 0.0);
    std::vector<double> last_value(n_obs);
    for (std::size_t k = 0; k < n_obs; ++k) last_value[k] = options.observables[k].fn(x);

    auto record = [&](double t) {
        traj.times_.push_back(t);
        traj.states_.insert(traj.states_.end(), x.data(), x.data() + n);
        for (std::size_t k = 0; k < n_obs; ++k) traj.accum_[k].push_back(running[k]);
    };
    record(0.0);

    const auto steps = static_cast<long>(std::ceil(options.t_end / options.dt - 1e-9));
    const double cap = options.norm_cap * std::sqrt(static_cast<double>(n));
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd dB(n);
    double t = 0.0;
    for (long s = 1; s <= steps; ++s) {
        const double t_next = (s == steps) ? options.t_end : s * options.dt;
        const double h = t_next - t;
        const double sqrt_h = std::sqrt(h);
        for (int i = 0; i < n; ++i) dB(i) = sqrt_h * normal(rng);
        x = step(x, h, dB, params);
        t = t_next;
        if (!x.allFinite() || x.norm() > cap) {
            traj.explosion_time_ = t;
            record(t);
            return traj;
        }
        for (std::size_t k = 0; k < n_obs; ++k) {
            const double v = options.observables[k].fn(x);
            running[k] += 0.5 * h * (v + last_value[k]);
            last_value[k] = v;
        }
        if (s % options.record_stride == 0 || s == steps) record(t);
    }
    return traj;
}

namespace {

void require_usable(const Trajectory& traj, double burn_in)
{
    if (traj.exploded()) throw ValidationError("time_average: trajectory exploded");
    require(burn_in >= 0.0 && burn_in < traj.final_time(), "time_average: burn_in must lie in [0, t_end)");
}

// Cumulative integral at time t, linear between stored times.
double cumulative_at(const Trajectory& traj, std::size_t obs, double t)
{
    const auto& times = traj.times();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.end()) return traj.accumulated(obs, times.size() - 1);
    const auto hi = static_cast<std::size_t>(it - times.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return (1.0 - w) * traj.accumulated(obs, lo) + w * traj.accumulated(obs, hi);
}

} // namespace

double time_average(const Trajectory& traj, const StateFn& fn, double burn_in)
{
    require_usable(traj, burn_in);
    const auto& times = traj.times();
    double integral = 0.0;
    double prev_t = burn_in;
    // value at burn_in by linear interpolation of the stored states
    auto it = std::upper_bound(times.begin(), times.end(), burn_in);
    auto i = static_cast<std::size_t>(it - times.begin());
    const double w = (burn_in - times[i - 1]) / (times[i] - times[i - 1]);
    Eigen::VectorXd interp = (1.0 - w) * traj.state(i - 1) + w * traj.state(i);
    double prev_v = fn(interp);
    for (; i < times.size(); ++i) {
        const double v = fn(traj.state(i));
        integral += 0.5 * (times[i] - prev_t) * (v + prev_v);
        prev_t = times[i];
        prev_v = v;
    }
    return integral / (traj.final_time() - burn_in);
}

AverageEstimate time_average(const Trajectory& traj, std::size_t observable, double burn_in, int batches)
{
    require_usable(traj, burn_in);
    require(observable < traj.observable_names().size(), "time_average: unknown observable index");
    require(batches >= 2, "time_average: need at least two batches");
    const double t0 = burn_in;
    const double t1 = traj.final_time();
    const double total = (cumulative_at(traj, observable, t1) - cumulative_at(traj, observable, t0)) / (t1 - t0);
    const double width = (t1 - t0) / batches;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int b = 0; b < batches; ++b) {
        const double lo = t0 + b * width;
        const double hi = (b + 1 == batches) ? t1 : lo + width;
        const double m = (cumulative_at(traj, observable, hi) - cumulative_at(traj, observable, lo)) / (hi - lo);
        sum += m;
        sum_sq += m * m;
    }
    const double mean_b = sum / batches;
    const double var = std::max(0.0, (sum_sq - batches * mean_b * mean_b) / (batches - 1));
    return {total, std::sqrt(var / batches)};
}

} // namespace lvsg::sde
