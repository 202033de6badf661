#include "lvsg/error.hpp"
#include "lvsg/frontier.hpp"
#include "lvsg/gibbs.hpp"
#include "lvsg/parallel.hpp"
#include "lvsg/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace lvsg::gibbs {

namespace {

Eigen::VectorXd default_start(const GibbsTarget& target)
{
    const BaseMeasure b = target.base();
    double m = b.mean(target.domain == Domain::box ? target.domain_size : std::numeric_limits<double>::infinity());
    Eigen::VectorXd x = Eigen::VectorXd::Constant(target.n(), m);
    if (!target.contains(x)) x *= 0.5 * target.domain_size / std::max(x.maxCoeff(), x.norm() / std::sqrt(target.n()));
    return x;
}

} // namespace

namespace {

McmcSamples run_chain(const GibbsTarget& target, const McmcOptions& options)
{
    require(options.chain_length >= 1 && options.burn_in >= 0 && options.thin >= 1, "mcmc: bad chain configuration");
    const int n = target.n();
    const BaseMeasure b = target.base();
    const double lin = b.beta * (1.0 + b.tilt);
    const double p = b.power();
    const Eigen::MatrixXd m = target.quadratic_matrix();

    // density of y = log x: prod base(e^y) e^y times exp(t interaction)
    auto log_target = [&](const Eigen::VectorXd& y, Eigen::VectorXd& x, double& energy) {
        x = y.array().exp().matrix();
        if (!target.contains(x) || !x.allFinite()) return -std::numeric_limits<double>::infinity();
        energy = 0.5 * b.beta * x.dot(m * x);
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += (p + 1.0) * y(i) - 0.5 * b.beta * x(i) * x(i) + lin * x(i);
        return s + options.coupling * energy;
    };

    Eigen::VectorXd x = options.initial ? *options.initial : default_start(target);
    require(x.size() == n && (x.array() > 0.0).all() && target.contains(x), "mcmc: initial state must be inside the domain");
    Eigen::VectorXd y = x.array().log().matrix();
    double energy = 0.0;
    double current = log_target(y, x, energy);

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    double log_scale = std::log(1.0 / std::sqrt(static_cast<double>(n)));
    Eigen::VectorXd y_new(n);
    Eigen::VectorXd x_new(n);

    auto propose = [&]() {
        const double scale = std::exp(log_scale);
        for (int i = 0; i < n; ++i) y_new(i) = y(i) + scale * normal(rng);
        double e_new = 0.0;
        const double cand = log_target(y_new, x_new, e_new);
        if (std::log(uniform(rng)) < cand - current) {
            y.swap(y_new);
            x.swap(x_new);
            energy = e_new;
            current = cand;
            return true;
        }
        return false;
    };

    constexpr long window = 50;
    long accepted = 0;
    for (long s = 1; s <= options.burn_in; ++s) {
        accepted += propose() ? 1 : 0;
        if (s % window == 0) {
            const double rate = static_cast<double>(accepted) / window;
            const double gain = 1.0 / std::sqrt(1.0 + static_cast<double>(s / window) / 10.0);
            log_scale += gain * (rate - options.target_acceptance) * 2.0;
            accepted = 0;
        }
    }

    McmcSamples out;
    out.n = n;
    out.proposal_scale = std::exp(log_scale);
    out.states.reserve(static_cast<std::size_t>(options.chain_length * n));
    out.interaction.reserve(static_cast<std::size_t>(options.chain_length));
    long total_accepted = 0;
    for (long s = 0; s < options.chain_length; ++s) {
        for (long k = 0; k < options.thin; ++k) total_accepted += propose() ? 1 : 0;
        out.states.insert(out.states.end(), x.data(), x.data() + n);
        out.interaction.push_back(energy);
    }
    out.acceptance_rate = static_cast<double>(total_accepted) / static_cast<double>(options.chain_length * options.thin);
    if (out.acceptance_rate < 0.01)
        throw ConvergenceError("mcmc: acceptance rate " + std::to_string(out.acceptance_rate) + " below 0.01 after adaptation");
    return out;
}

} // namespace

McmcSamples mcmc_sample(const GibbsTarget& target, const McmcOptions& options)
{
    target.validate();
    return run_chain(target, options);
}

MeanEstimate chain_mean(const std::vector<double>& values, int batches)
{
    require(batches >= 2 && values.size() >= static_cast<std::size_t>(batches), "chain_mean: too few values");
    const std::size_t per = values.size() / static_cast<std::size_t>(batches);
    std::vector<double> means(static_cast<std::size_t>(batches));
    for (int b = 0; b < batches; ++b) {
        const auto first = values.begin() + static_cast<std::ptrdiff_t>(b * per);
        means[static_cast<std::size_t>(b)] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(per), 0.0) / per;
    }
    const double mean = std::accumulate(means.begin(), means.end(), 0.0) / batches;
    double ss = 0.0;
    for (double v : means) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (batches - 1) / batches)};
}

double gelman_rubin(const std::vector<std::vector<double>>& chains)
{
    require(chains.size() >= 2, "gelman_rubin needs at least two chains");
    const std::size_t len = chains.front().size();
    require(len >= 2, "gelman_rubin needs chains of length >= 2");
    std::vector<double> means;
    double within = 0.0;
    for (const auto& c : chains) {
        require(c.size() == len, "gelman_rubin: chains must have equal length");
        const double mu = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(len);
        double ss = 0.0;
        for (double v : c) ss += (v - mu) * (v - mu);
        within += ss / static_cast<double>(len - 1);
        means.push_back(mu);
    }
    const auto m = static_cast<double>(chains.size());
    within /= m;
    const double grand = std::accumulate(means.begin(), means.end(), 0.0) / m;
    double between = 0.0;
    for (double mu : means) between += (mu - grand) * (mu - grand);
    between *= static_cast<double>(len) / (m - 1.0);
    const double l = static_cast<double>(len);
    const double pooled = (l - 1.0) / l * within + between / l;
    return std::sqrt(pooled / within);
}

// ---------------------------------------------------------------------------

FreeEnergyEstimate log_z_thermo(const GibbsTarget& target, const ThermoOptions& options)
{
    target.validate();
    require(target.domain != Domain::ball, "thermodynamic integration supports the orthant and box domains");
    require(options.t_points >= 2, "thermodynamic integration needs at least two coupling points");
    const int n = target.n();
    const BaseMeasure b = target.base();
    const double upper = target.domain == Domain::box ? target.domain_size : std::numeric_limits<double>::infinity();
    const double log_z0 = n * b.log_mass(upper);
    const bool decoupled = target.quadratic_matrix().cwiseAbs().maxCoeff() == 0.0;

    struct Node {
        double t;
        MeanEstimate value;
    };
    std::vector<Node> nodes;
    std::uint64_t stream = 0;
    auto evaluate = [&](double t) {
        if (decoupled) return MeanEstimate{0.0, 0.0};
        McmcOptions chain = options.chain;
        chain.coupling = t;
        chain.seed = derive_seed(options.chain.seed, stream++);
        const McmcSamples s = run_chain(target, chain);
        return chain_mean(s.interaction, options.batches);
    };
    for (int i = 0; i < options.t_points; ++i) {
        const double t = static_cast<double>(i) / (options.t_points - 1);
        nodes.push_back({t, evaluate(t)});
    }
    for (int pass = 0; pass < options.refinement_passes && !decoupled; ++pass) {
        double mean_step = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) mean_step += std::abs(nodes[i + 1].value.mean - nodes[i].value.mean);
        mean_step /= static_cast<double>(nodes.size() - 1);
        std::vector<Node> refined;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            refined.push_back(nodes[i]);
            if (std::abs(nodes[i + 1].value.mean - nodes[i].value.mean) > 2.0 * mean_step) {
                const double t = 0.5 * (nodes[i].t + nodes[i + 1].t);
                refined.push_back({t, evaluate(t)});
            }
        }
        refined.push_back(nodes.back());
        if (refined.size() == nodes.size()) break;
        nodes = std::move(refined);
    }

    double integral = 0.0;
    double variance = 0.0;
    std::vector<double> weights(nodes.size(), 0.0);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double h = nodes[i + 1].t - nodes[i].t;
        weights[i] += 0.5 * h;
        weights[i + 1] += 0.5 * h;
    }
    FreeEnergyEstimate out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        integral += weights[i] * nodes[i].value.mean;
        variance += weights[i] * weights[i] * nodes[i].value.std_error * nodes[i].value.std_error;
        out.schedule.push_back(nodes[i].t);
        out.integrand.push_back(nodes[i].value.mean);
    }
    out.n = n;
    out.log_z = log_z0 + integral;
    out.value = out.log_z / n;
    out.std_error = std::sqrt(variance) / n;
    out.replicas = 1;
    out.seeds = {options.chain.seed};
    return out;
}

FreeEnergyEstimate free_energy_disorder_avg(int n, const EnsembleParams& ensemble, double beta, double phi,
                                            const DisorderOptions& options)
{
    ensemble.validate();
    require(n >= 1, "free energy: n must be >= 1");
    require(options.replicas >= 1, "free energy: replicas must be >= 1");
    require(beta > 0.0 && phi * beta > 1.0, "free energy: needs beta > 0 and phi beta > 1");
    double eps = options.eps_sigma;
    if (eps == 0.0) {
        const double lam = frontier::lambda_plus(ensemble).lambda_plus;
        require(lam < 1.0, "free energy: needs lambda_+(kappa, alpha) < 1, got " + std::to_string(lam));
        eps = 0.5 * (1.0 - lam);
    }
    require(eps > 0.0 && eps < 1.0, "eps_sigma must lie in (0, 1)");

    const int r = options.replicas;
    std::vector<FreeEnergyEstimate> per(static_cast<std::size_t>(r));
    std::vector<int> truncated(static_cast<std::size_t>(r), 0);
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) seeds[static_cast<std::size_t>(i)] = derive_seed(options.seed, static_cast<std::uint64_t>(i));

    parallel_for(r, options.jobs, [&](int i) {
        const auto k = static_cast<std::size_t>(i);
        const InteractionMatrix sigma = InteractionMatrix::deformed_goe(n, ensemble, seeds[k]);
        const bool ok = randmat::is_realizable(sigma.entries(), eps);
        truncated[k] = ok ? 0 : 1;
        GibbsTarget target{ModelParams{ok ? sigma : sigma.zeroed(), phi, 1.0 / beta}, Domain::orthant, 0.0, std::nullopt};
        ThermoOptions thermo = options.thermo;
        thermo.chain.seed = derive_seed(seeds[k], 0xc4a1);
        per[k] = log_z_thermo(target, thermo);
    });

    FreeEnergyEstimate out;
    out.n = n;
    out.replicas = r;
    out.seeds = seeds;
    out.schedule = per.front().schedule;
    double sum = 0.0;
    for (const auto& e : per) sum += e.value;
    const double mean = sum / r;
    if (r == 1) {
        out.std_error = per.front().std_error;
        out.integrand = per.front().integrand;
    } else {
        double ss = 0.0;
        for (const auto& e : per) ss += (e.value - mean) * (e.value - mean);
        out.std_error = std::sqrt(ss / (r - 1) / r);
    }
    out.value = mean;
    out.log_z = n * mean;
    out.truncation_frequency = static_cast<double>(std::accumulate(truncated.begin(), truncated.end(), 0)) / r;
    return out;
}

} // namespace lvsg::gibbs
