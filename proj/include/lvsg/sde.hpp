#pragma once

// Full-truncation Euler scheme for the Lotka-Volterra SDE
//   dx = x (1 + (Sigma - I) x) dt + phi dt + sqrt(2 T x) dB
// with explosion monitoring and time-averaged observables.

#include "lvsg/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lvsg::sde {

using StateFn = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>;

struct Observable {
    std::string name;
    StateFn fn;
};

/// Site averages of x, x^2 and log x; names match the CLI observable list.
Observable observable_by_name(const std::string& name);

/// One full-truncation step. `dB` holds Brownian increments (normals * sqrt(dt)).
Eigen::VectorXd step(const Eigen::VectorXd& x, double dt, const Eigen::VectorXd& dB, const ModelParams& params);

struct SimulationOptions {
    double dt = 1e-3;
    double t_end = 1.0;
    Eigen::VectorXd x0;
    std::uint64_t seed = 0;
    double norm_cap = 1e3;  ///< stop when ||x|| > norm_cap * sqrt(n)
    long record_stride = 1; ///< keep every k-th state
    std::vector<Observable> observables;
};

class Trajectory {
public:
    int n() const { return n_; }
    std::size_t size() const { return times_.size(); }
    const std::vector<double>& times() const { return times_; }
    Eigen::Map<const Eigen::VectorXd> state(std::size_t i) const
    {
        return {states_.data() + i * static_cast<std::size_t>(n_), n_};
    }
    bool exploded() const { return explosion_time_.has_value(); }
    std::optional<double> explosion_time() const { return explosion_time_; }
    double final_time() const { return times_.back(); }

    const std::vector<std::string>& observable_names() const { return names_; }
    /// Running integral int_0^{t_i} obs(x_s) ds at stored time i, accumulated at
    /// every integration step (not only at stored ones).
    double accumulated(std::size_t observable, std::size_t i) const { return accum_[observable][i]; }

private:
    friend Trajectory simulate(const ModelParams&, const SimulationOptions&);

    int n_ = 0;
    std::vector<double> times_;
    std::vector<double> states_;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> accum_;
    std::optional<double> explosion_time_;
};

Trajectory simulate(const ModelParams& params, const SimulationOptions& options);

/// Trapezoidal average of `fn` over stored states in (burn_in, t_end].
double time_average(const Trajectory& traj, const StateFn& fn, double burn_in);

struct AverageEstimate {
    double mean;
    double std_error; ///< batch-means standard error
};

/// Average of a registered observable using the full-resolution accumulators,
/// with a batch-means error from `batches` equal windows.
AverageEstimate time_average(const Trajectory& traj, std::size_t observable, double burn_in, int batches = 50);

} // namespace lvsg::sde
