#include "lvsg/error.hpp"
#include "lvsg/gibbs.hpp"
#include "lvsg/sde.hpp"
#include "lvsg/seeding.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>

using namespace lvsg;
using namespace lvsg::gibbs;

namespace {

// Frozen output of the full n = 4 pipeline (kappa 0.3, alpha 0, beta 2, phi 1,
// 20 replicas, seed 1, default schedule).
constexpr double kFreeEnergyN4 = 1.8108794014;

ModelParams model(const Eigen::MatrixXd& sigma, double phi, double temperature)
{
    return {InteractionMatrix::from_entries(sigma), phi, temperature};
}

GibbsTarget orthant(const ModelParams& p) { return {p, Domain::orthant, 0.0, std::nullopt}; }

Eigen::MatrixXd coupled_2d()
{
    Eigen::MatrixXd s(2, 2);
    s << 0.2, -0.35, -0.35, 0.1;
    return s;
}

// log int exp(beta/2 x^T S x) prod site(dx_i) over the quarter plane, Boost oracle
double oracle_log_z_2d(const Eigen::MatrixXd& s, double beta, double phi)
{
    const oracle::Site site{beta, phi, 0.0};
    const double h = 2.0 * site.cutoff();
    return std::log(oracle::integrate_2d(
        [&](double x, double y) {
            const double q = s(0, 0) * x * x + 2 * s(0, 1) * x * y + s(1, 1) * y * y;
            return site.density(x) * site.density(y) * std::exp(0.5 * beta * q);
        },
        h));
}

double oracle_moment_2d(const Eigen::MatrixXd& s, double beta, double phi, int coord)
{
    const oracle::Site site{beta, phi, 0.0};
    const double h = 2.0 * site.cutoff();
    const double z = std::exp(oracle_log_z_2d(s, beta, phi));
    return oracle::integrate_2d(
               [&](double x, double y) {
                   const double q = s(0, 0) * x * x + 2 * s(0, 1) * x * y + s(1, 1) * y * y;
                   return (coord == 0 ? x : y) * site.density(x) * site.density(y) * std::exp(0.5 * beta * q);
               },
               h)
           / z;
}

Eigen::VectorXd random_positive(int n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.05, 3.0);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = u(rng);
    return x;
}

} // namespace

TEST_CASE("Hamiltonian values and input checks")
{
    const auto p = model(Eigen::MatrixXd::Zero(1, 1), 0.8, 0.5);
    CHECK(hamiltonian(Eigen::VectorXd::Ones(1), p) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(hamiltonian(Eigen::VectorXd::Zero(1), p), ValidationError);
    CHECK_THROWS_AS(hamiltonian(-Eigen::VectorXd::Ones(1), p), ValidationError);
    CHECK_THROWS_AS(hamiltonian(Eigen::VectorXd::Ones(1), model(Eigen::MatrixXd::Zero(1, 1), 0.5, 0.5)),
                    ValidationError);
    // -inf at the boundary when phi > T
    CHECK(hamiltonian(Eigen::VectorXd::Constant(1, 1e-300), p) < -100.0);
}

TEST_CASE("Hamiltonian is permutation invariant for a rank-one mean field")
{
    const int n = 6;
    const auto p = model(Eigen::MatrixXd::Constant(n, n, -0.4 / n), 1.0, 0.5);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        Eigen::VectorXd x = random_positive(n, rng);
        const double h = hamiltonian(x, p);
        std::shuffle(x.data(), x.data() + n, rng);
        CHECK(hamiltonian(x, p) == doctest::Approx(h).epsilon(1e-13));
    }
}

TEST_CASE("beta H decomposes into H_n plus the product base measure")
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const int n = 5;
        const EnsembleParams ens{0.4, -0.7};
        const auto sigma = InteractionMatrix::deformed_goe(n, ens, seed);
        const ModelParams p{sigma, 1.3, 0.6};
        const double beta = p.beta();
        std::mt19937_64 rng(seed);
        for (int t = 0; t < 50; ++t) {
            const Eigen::VectorXd x = random_positive(n, rng);
            const double sum = x.sum();
            const double h_n = beta * ens.kappa / (2.0 * std::sqrt(n)) * x.dot(sigma.goe() * x)
                               + 0.5 * beta * ens.alpha * sum * sum / n;
            CHECK(std::abs(interaction_energy(x, p) - h_n) < 1e-10);
            double base = 0.0;
            for (int i = 0; i < n; ++i) base += std::log(mu_beta_density(x(i), p));
            CHECK(std::abs(beta * hamiltonian(x, p) - (h_n + base)) < 1e-10);
        }
    }
}

TEST_CASE("mu_beta density and mass")
{
    const auto p = model(Eigen::MatrixXd::Zero(1, 1), 1.0, 0.5);
    CHECK(mu_beta_density(1.0, p) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(mu_beta_density(1e-12, p) < 1e-11);
    CHECK_THROWS_AS(mu_beta_density(0.0, p), ValidationError);
    CHECK_THROWS_AS(mu_beta_density(1.0, model(Eigen::MatrixXd::Zero(1, 1), 1.0, 1.0)), ValidationError);
    CHECK_THROWS_AS(mu_beta(model(Eigen::MatrixXd::Zero(1, 1), 0.4, 0.5)), ValidationError);

    const oracle::Site site{2.0, 1.0, 0.0};
    const double ts = oracle::site_log_mass(site);
    const double gk = oracle::site_log_mass_gk(site);
    CHECK(std::abs(ts - gk) < 1e-8);
    CHECK(std::abs(mu_beta(p).log_mass() - ts) < 1e-8);

    for (double phi : {0.6, 1.0, 2.5}) {
        for (double temperature : {0.1, 0.5}) {
            if (phi <= temperature) continue;
            const auto q = model(Eigen::MatrixXd::Zero(1, 1), phi, temperature);
            const oracle::Site s{1.0 / temperature, phi, 0.0};
            CHECK(std::abs(mu_beta(q).log_mass() - oracle::site_log_mass(s)) < 1e-9);
            CHECK(std::abs(mu_beta(q).log_mass(1.5) - oracle::site_log_mass(s, 1.5)) < 1e-9);
            const double mean = oracle::site_integral(s, [](double x) { return x; }) / std::exp(oracle::site_log_mass(s));
            CHECK(mu_beta(q).mean() == doctest::Approx(mean).epsilon(1e-9));
        }
    }
}

TEST_CASE("external-field measure")
{
    const auto p = model(Eigen::MatrixXd::Zero(1, 1), 1.0, 0.5);
    const auto mu = mu_beta(p);
    for (double x : {0.1, 0.7, 2.0}) {
        CHECK(external_field_measure(p, 0.8, 0.0).density(x) == mu.density(x));
        CHECK(external_field_measure(p, 0.0, 3.0).density(x) == mu.density(x));
    }
    double prev = -1e300;
    for (int i = 0; i <= 10; ++i) {
        const double mass = external_field_measure(p, 0.5, 0.2 * i).log_mass();
        CHECK(mass > prev);
        prev = mass;
    }
    const oracle::Site tilted{2.0, 1.0, 0.5 * 1.3};
    CHECK(std::abs(external_field_measure(p, 0.5, 1.3).log_mass() - oracle::site_log_mass(tilted)) < 1e-9);
}

TEST_CASE("quadrature log Z against independent oracles")
{
    // n = 1, Sigma = 0: log mass of mu_beta
    const auto p1 = model(Eigen::MatrixXd::Zero(1, 1), 1.0, 0.5);
    const oracle::Site site{2.0, 1.0, 0.0};
    CHECK(std::abs(quadrature_log_z(orthant(p1)) - oracle::site_log_mass(site)) < 1e-8);
    CHECK(std::abs(quadrature_log_z(orthant(p1)) - oracle::site_log_mass_gk(site)) < 1e-8);

    // n = 2 diagonal: product of the two one-dimensional integrals
    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
    diag(0, 0) = 0.3;
    diag(1, 1) = -0.5;
    auto one_d = [](double s) {
        return quadrature_log_z(orthant(model(Eigen::MatrixXd::Constant(1, 1, s), 1.0, 0.5)));
    };
    CHECK(std::abs(quadrature_log_z(orthant(model(diag, 1.0, 0.5))) - (one_d(0.3) + one_d(-0.5))) < 1e-9);

    // n = 2 coupled against nested Gauss-Kronrod
    const Eigen::MatrixXd s = coupled_2d();
    const double coupled = quadrature_log_z(orthant(model(s, 1.0, 0.5)));
    CHECK(std::abs(coupled - oracle_log_z_2d(s, 2.0, 1.0)) < 1e-8);

    // Jensen: log Z_coupled >= log Z_0 + <coupling>_0
    const auto free_target = orthant(model(Eigen::MatrixXd::Zero(2, 2), 1.0, 0.5));
    const double log_z0 = quadrature_log_z(free_target);
    const double mean_coupling = quadrature_expectation(free_target, [&](const Eigen::VectorXd& x) {
        return 0.5 * 2.0 * x.dot(s * x);
    });
    CHECK(std::abs(coupled - log_z0) > 1e-3);
    CHECK(coupled >= log_z0 + mean_coupling);
}

TEST_CASE("quadrature log Z in three dimensions is stable under refinement")
{
    const auto sigma = InteractionMatrix::deformed_goe(3, {0.3, 0.2}, 5);
    const GibbsTarget t{ModelParams{sigma, 1.0, 0.5}, Domain::orthant, 0.0, std::nullopt};
    const double coarse = quadrature_log_z(t);
    const double fine = quadrature_log_z(t, {32, 7.0});
    CHECK(std::abs(coarse - fine) < 1e-8);
}

TEST_CASE("non-normalizable targets are rejected")
{
    const auto p = model(1.5 * Eigen::MatrixXd::Identity(2, 2), 1.0, 0.5);
    CHECK_THROWS_AS(quadrature_log_z(orthant(p)), ValidationError);
    CHECK_THROWS_AS(mcmc_sample(orthant(p), {}), ValidationError);
    // the same matrix on a box is fine
    const GibbsTarget box{p, Domain::box, 3.0, std::nullopt};
    CHECK(std::isfinite(quadrature_log_z(box)));
    // T >= phi
    CHECK_THROWS_AS(quadrature_log_z(orthant(model(Eigen::MatrixXd::Zero(1, 1), 0.3, 0.5))), ValidationError);
}

TEST_CASE("log Z grows with the box edge and the ball radius")
{
    const auto p = model(coupled_2d(), 1.0, 0.5);
    double prev = -1e300;
    for (double a : {0.5, 1.0, 1.5, 2.0, 3.0, 5.0}) {
        const double v = quadrature_log_z({p, Domain::box, a, std::nullopt});
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(std::abs(prev - quadrature_log_z(orthant(p))) < 1e-6);
    prev = -1e300;
    for (double a : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        const double v = quadrature_log_z({p, Domain::ball, a, std::nullopt});
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("MCMC: one-dimensional mean, two-dimensional marginals, two starting points")
{
    const auto p1 = model(Eigen::MatrixXd::Zero(1, 1), 1.0, 0.5);
    McmcOptions opt;
    opt.chain_length = 100000;
    opt.seed = 17;
    auto s1 = mcmc_sample(orthant(p1), opt);
    std::vector<double> xs(s1.size());
    for (std::size_t i = 0; i < s1.size(); ++i) xs[i] = s1.state(i)(0);
    const auto m1 = chain_mean(xs);
    CHECK(s1.acceptance_rate > 0.15);
    CHECK(s1.acceptance_rate < 0.5);
    CHECK(std::abs(m1.mean - mu_beta(p1).mean()) < 3.0 * m1.std_error);
    for (std::size_t i = 0; i < s1.size(); ++i) REQUIRE(s1.state(i)(0) > 0.0);

    const Eigen::MatrixXd s = coupled_2d();
    const auto p2 = model(s, 1.0, 0.5);
    auto s2 = mcmc_sample(orthant(p2), opt);
    for (int c = 0; c < 2; ++c) {
        std::vector<double> v(s2.size());
        for (std::size_t i = 0; i < s2.size(); ++i) v[i] = s2.state(i)(c);
        const auto m = chain_mean(v);
        CHECK(std::abs(m.mean - oracle_moment_2d(s, 2.0, 1.0, c)) < 3.0 * m.std_error);
    }

    // two chains, from the quadrature mean and from 0.1 * 1
    const Eigen::VectorXd mean_start(Eigen::Vector2d(quadrature_expectation(orthant(p2), [](const auto& x) { return x(0); }),
                                                     quadrature_expectation(orthant(p2), [](const auto& x) { return x(1); })));
    std::vector<std::vector<double>> traces;
    for (const Eigen::VectorXd& start : {mean_start, Eigen::VectorXd(Eigen::VectorXd::Constant(2, 0.1))}) {
        McmcOptions o = opt;
        o.chain_length = 40000;
        o.initial = start;
        o.seed = static_cast<std::uint64_t>(traces.size() + 100);
        auto run = mcmc_sample(orthant(p2), o);
        std::vector<double> v(run.size());
        for (std::size_t i = 0; i < run.size(); ++i) v[i] = run.state(i)(0);
        traces.push_back(std::move(v));
    }
    CHECK(gelman_rubin(traces) < 1.05);
}

TEST_CASE("MCMC respects box and ball domains")
{
    const auto p = model(coupled_2d(), 1.0, 0.5);
    McmcOptions opt;
    opt.chain_length = 20000;
    const GibbsTarget box{p, Domain::box, 1.0, std::nullopt};
    auto s = mcmc_sample(box, opt);
    for (std::size_t i = 0; i < s.size(); ++i) REQUIRE(s.state(i).maxCoeff() <= 1.0);
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = s.state(i)(0);
    const auto m = chain_mean(v);
    CHECK(std::abs(m.mean - quadrature_expectation(box, [](const auto& x) { return x(0); })) < 3.0 * m.std_error + 1e-3);

    const GibbsTarget ball{p, Domain::ball, 0.8, std::nullopt};
    auto b = mcmc_sample(ball, opt);
    for (std::size_t i = 0; i < b.size(); ++i) REQUIRE(b.state(i).squaredNorm() <= 0.64 * 2 + 1e-12);
}

TEST_CASE("chain diagnostics")
{
    std::vector<double> v(1000);
    std::iota(v.begin(), v.end(), 0.0);
    const auto m = chain_mean(v, 10);
    CHECK(m.mean == doctest::Approx(499.5));
    CHECK(m.std_error > 0.0);
    CHECK_THROWS_AS(chain_mean({1.0}, 2), ValidationError);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    std::vector<std::vector<double>> same(3, std::vector<double>(5000));
    for (auto& c : same)
        for (double& x : c) x = normal(rng);
    CHECK(gelman_rubin(same) < 1.01);
    for (double& x : same[0]) x += 3.0;
    CHECK(gelman_rubin(same) > 1.5);
}

TEST_CASE("bump derivatives agree with finite differences")
{
    const Bump f{Eigen::Vector2d(1.0, 1.4), Eigen::Vector2d(0.6, 0.9)};
    const Eigen::Vector2d x(1.2, 1.1);
    const double h = 1e-5;
    for (int i = 0; i < 2; ++i) {
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e(i) = h;
        CHECK(std::abs((f.value(x + e) - f.value(x - e)) / (2 * h) - f.gradient(x)(i)) < 1e-8);
        const Eigen::VectorXd dg = (f.gradient(x + e) - f.gradient(x - e)) / (2 * h);
        for (int j = 0; j < 2; ++j) CHECK(std::abs(dg(j) - f.hessian(x)(j, i)) < 1e-7);
    }
    CHECK(f.value(Eigen::Vector2d(1.0, 1.4)) == 1.0);
    CHECK(f.value(Eigen::Vector2d(3.0, 1.4)) == 0.0);
}

TEST_CASE("generator vanishes against the invariant measure")
{
    const auto p1 = model(Eigen::MatrixXd::Zero(1, 1), 1.0, 0.5);
    const Bump b1{Eigen::VectorXd::Constant(1, 1.2), Eigen::VectorXd::Constant(1, 0.8)};
    CHECK(std::abs(generator_residual(b1, orthant(p1))) < 1e-6);

    const auto p2 = model(coupled_2d(), 1.0, 0.5);
    const Bump b2{Eigen::Vector2d(1.0, 0.9), Eigen::Vector2d(0.7, 0.6)};
    CHECK(std::abs(generator_residual(b2, orthant(p2))) < 1e-5);

    CHECK_THROWS_AS(generator_residual(Bump{Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Constant(1, 0.8)},
                                       orthant(p1)),
                    ValidationError);
}

TEST_CASE("generator of a wide bump is flat near its centre")
{
    const auto p = model(Eigen::MatrixXd::Zero(1, 1), 1.0, 0.5);
    double prev = 1e300;
    for (double w : {1.0, 4.0, 16.0, 64.0}) {
        const Bump b{Eigen::VectorXd::Constant(1, w + 1.0), Eigen::VectorXd::Constant(1, w)};
        const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, w + 1.0);
        CHECK(b.gradient(x).norm() == 0.0);
        // only the diffusion term survives: T x f''(x) = -2 T x / w^2
        const double a = generator(b, x, p);
        CHECK(a == doctest::Approx(-2.0 * 0.5 * (w + 1.0) / (w * w)).epsilon(1e-12));
        CHECK(std::abs(a) < prev);
        prev = std::abs(a);
    }
    CHECK(prev < 0.02);
}

TEST_CASE("thermodynamic integration: decoupled case and quadrature oracle")
{
    const auto free_p = model(Eigen::MatrixXd::Zero(3, 3), 1.0, 0.5);
    const auto e0 = log_z_thermo(orthant(free_p), {});
    CHECK(e0.log_z == doctest::Approx(3.0 * mu_beta(free_p).log_mass()).epsilon(1e-14));
    for (double v : e0.integrand) CHECK(v == 0.0);

    const auto p2 = model(coupled_2d(), 1.0, 0.5);
    ThermoOptions opt;
    opt.chain.seed = 5;
    const auto e = log_z_thermo(orthant(p2), opt);
    CHECK(e.std_error > 0.0);
    CHECK(std::abs(e.log_z - quadrature_log_z(orthant(p2))) < 3.0 * e.std_error * 2);
    CHECK(e.schedule.front() == 0.0);
    CHECK(e.schedule.back() == 1.0);
    CHECK(e.schedule.size() >= 21);
    CHECK(e.integrand.size() == e.schedule.size());

    // box domain: log Z(0) uses the truncated mass
    const GibbsTarget box{p2, Domain::box, 1.5, std::nullopt};
    const auto eb = log_z_thermo(box, opt);
    CHECK(std::abs(eb.log_z - quadrature_log_z(box)) < 3.0 * eb.std_error * 2);
    CHECK_THROWS_AS(log_z_thermo({p2, Domain::ball, 1.0, std::nullopt}, opt), ValidationError);
}

TEST_CASE("disorder spread of log Z grows with beta kappa")
{
    auto spread = [](double kappa) {
        std::vector<double> v;
        for (int s = 0; s < 20; ++s) {
            const auto sigma = InteractionMatrix::deformed_goe(2, {kappa, 0.0}, 300 + s);
            ThermoOptions opt;
            opt.t_points = 11;
            opt.chain.chain_length = 5000;
            opt.chain.burn_in = 1000;
            opt.chain.seed = 900 + s;
            v.push_back(log_z_thermo(orthant({sigma, 1.0, 0.5}), opt).value);
        }
        const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        double ss = 0.0;
        for (double x : v) ss += (x - m) * (x - m);
        return ss / (v.size() - 1);
    };
    CHECK(spread(0.1) < spread(0.25));
}

TEST_CASE("disorder average: single replica, truncation and the n = 4 anchor")
{
    const EnsembleParams ens{0.3, 0.0};
    DisorderOptions one;
    one.replicas = 1;
    one.seed = 12;
    const auto avg = free_energy_disorder_avg(2, ens, 2.0, 1.0, one);
    const auto sigma = InteractionMatrix::deformed_goe(2, ens, derive_seed(12, 0));
    ThermoOptions thermo;
    thermo.chain.seed = derive_seed(derive_seed(12, 0), 0xc4a1);
    const auto direct = log_z_thermo(orthant({sigma, 1.0, 0.5}), thermo);
    CHECK(avg.value == direct.value);
    CHECK(avg.std_error == direct.std_error);
    CHECK(avg.replicas == 1);

    // reproducible regardless of the number of worker threads
    DisorderOptions par;
    par.replicas = 4;
    par.thermo.chain.chain_length = 2000;
    par.thermo.chain.burn_in = 500;
    const auto serial = free_energy_disorder_avg(3, ens, 2.0, 1.0, par);
    par.jobs = 3;
    const auto threaded = free_energy_disorder_avg(3, ens, 2.0, 1.0, par);
    CHECK(serial.value == threaded.value);
    CHECK(serial.seeds == threaded.seeds);

    // truncated draws count, and become rarer as n grows
    auto frequency = [](int n) {
        DisorderOptions o;
        o.replicas = 60;
        o.seed = 4;
        o.thermo.t_points = 2;
        o.thermo.refinement_passes = 0;
        o.thermo.chain.chain_length = 100;
        o.thermo.chain.burn_in = 300;
        o.thermo.batches = 2;
        return free_energy_disorder_avg(n, {0.6, 0.0}, 2.0, 1.0, o).truncation_frequency;
    };
    const double f2 = frequency(2);
    const double f40 = frequency(40);
    MESSAGE("truncation frequency n=2: " << f2 << ", n=40: " << f40);
    CHECK(f2 > 0.1);
    CHECK(f40 < f2);

    DisorderOptions anchor;
    anchor.replicas = 20;
    anchor.seed = 1;
    const auto fe = free_energy_disorder_avg(4, ens, 2.0, 1.0, anchor);
    MESSAGE("n=4 free energy " << std::setprecision(12) << fe.value << " +- " << fe.std_error);
    CHECK(fe.std_error > 0.0);
    CHECK(fe.value == doctest::Approx(kFreeEnergyN4).epsilon(1e-9));
    CHECK(fe.seeds.size() == 20);
    // Jensen with zero-mean couplings: E log Z >= log Z_0, per site
    CHECK(fe.value > mu_beta(model(Eigen::MatrixXd::Zero(1, 1), 1.0, 0.5)).log_mass() - 3.0 * fe.std_error);

    CHECK_THROWS_AS(free_energy_disorder_avg(4, {0.8, 0.0}, 2.0, 1.0, anchor), ValidationError);
    CHECK_THROWS_AS(free_energy_disorder_avg(4, ens, 2.0, 0.4, anchor), ValidationError);
}

TEST_CASE("SDE time averages match MCMC moments")
{
    const auto p = model(coupled_2d(), 1.0, 0.5);
    McmcOptions opt;
    opt.chain_length = 100000;
    opt.seed = 8;
    const auto chain = mcmc_sample(orthant(p), opt);
    std::vector<double> sq(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i) sq[i] = chain.state(i).squaredNorm() / 2.0;
    const auto mc = chain_mean(sq);

    sde::SimulationOptions so;
    so.x0 = Eigen::VectorXd::Ones(2);
    so.dt = 2e-3;
    so.t_end = 4000.0;
    so.record_stride = 500;
    so.seed = 8;
    so.observables = {sde::observable_by_name("second-moment")};
    const auto traj = sde::simulate(p, so);
    const auto ta = sde::time_average(traj, 0, 20.0);
    CHECK(std::abs(ta.mean - mc.mean) < 3.0 * std::sqrt(ta.std_error * ta.std_error + mc.std_error * mc.std_error));
}
