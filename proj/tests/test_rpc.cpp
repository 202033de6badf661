#include "lvsg/error.hpp"
#include "lvsg/rpc.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace lvsg;
using namespace lvsg::rpc;

namespace {

struct Moments {
    double mean = 0.0;
    double se = 0.0;
};

Moments moments(const std::vector<double>& v)
{
    Moments m;
    for (double x : v) m.mean += x / v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.se = std::sqrt(ss / (v.size() - 1) / v.size());
    return m;
}

parisi::Args model_args(double kappa)
{
    parisi::Args g;
    g.a = 8.0;
    g.model = parisi::Model{2.0, kappa, 0.0, 1.0};
    return g;
}

} // namespace

TEST_CASE("one-level cascade: weights, ordering and determinism")
{
    const std::vector<double> l{0.5};
    const auto c = sample_cascade(l, 1000, std::uint64_t{3});
    REQUIRE(c.leaves() == 1000);
    const auto w = c.weights();
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] <= w[i - 1]);
    CHECK(c.log_weights == sample_cascade(l, 1000, std::uint64_t{3}).log_weights);
    CHECK(c.log_weights != sample_cascade(l, 1000, std::uint64_t{4}).log_weights);
    CHECK(c.retained_mass_estimate > 0.99);
    CHECK(c.retained_mass_estimate < 1.0);
    CHECK(c.path(7) == std::vector<int>{7});

    CHECK_THROWS_AS(sample_cascade(l, 50, std::uint64_t{1}), ValidationError);
    CHECK_NOTHROW(sample_cascade(l, 50, std::uint64_t{1}, true));
    CHECK_THROWS_AS(sample_cascade(std::vector<double>{0.6, 0.3}, 100, std::uint64_t{1}), ValidationError);
    CHECK_THROWS_AS(sample_cascade(std::vector<double>{0.2, 0.4, 0.6}, 101, std::uint64_t{1}), ValidationError);
}

TEST_CASE("Poisson-Dirichlet overlap: E sum v_i^2 = 1 - lambda")
{
    for (double lambda : {0.3, 0.5}) {
        std::vector<double> s2;
        for (int r = 0; r < 800; ++r) {
            const auto w = sample_cascade(std::vector<double>{lambda}, 1000, std::uint64_t(10000 + r)).weights();
            s2.push_back(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
        }
        const auto m = moments(s2);
        MESSAGE("lambda=" << lambda << " E sum v^2=" << m.mean << " +- " << m.se);
        CHECK(std::abs(m.mean - (1.0 - lambda)) < 3.5 * m.se);
    }
}

TEST_CASE("largest PD(0.5) weight matches stick-breaking")
{
    // mean of the largest weight over 1e5 independent stick-breaking draws,
    // V_i ~ Beta(1/2, i/2), 4000 sticks (leftover mass < 0.004); standard error 8.0e-4
    const double stick_mean = 0.6247175578;
    const double stick_se = 8.0e-4;
    std::vector<double> top;
    for (int r = 0; r < 4000; ++r)
        top.push_back(sample_cascade(std::vector<double>{0.5}, 10000, std::uint64_t(70000 + r)).weights().front());
    const auto m = moments(top);
    MESSAGE("largest weight " << m.mean << " +- " << m.se);
    CHECK(std::abs(m.mean - stick_mean) < 3.0 * std::hypot(m.se, stick_se));
}

TEST_CASE("two-level cascade: overlap probabilities at both levels")
{
    // two replicas share a level-1 node with probability 1 - lambda_0 and a leaf
    // with probability 1 - lambda_1
    const std::vector<double> l{0.25, 0.4};
    const int n = 200;
    std::vector<double> leaf2;
    std::vector<double> node2;
    for (int r = 0; r < 400; ++r) {
        const auto c = sample_cascade(l, n, std::uint64_t(500 + r));
        const auto w = c.weights();
        leaf2.push_back(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double node = std::accumulate(w.begin() + i * n, w.begin() + (i + 1) * n, 0.0);
            s += node * node;
        }
        node2.push_back(s);
        CHECK(c.path(static_cast<std::size_t>(3 * n + 17)) == std::vector<int>{3, 17});
    }
    const auto a = moments(node2);
    const auto b = moments(leaf2);
    CHECK(std::abs(a.mean - 0.75) < 3.5 * a.se);
    CHECK(std::abs(b.mean - 0.6) < 3.5 * b.se);
}

TEST_CASE("tree processes: covariances from the shared path")
{
    const parisi::ParisiMeasure zeta({0.3, 0.7}, {0.0, 0.4, 1.1});
    const double beta = 2.0;
    const double kappa = 0.35;
    const double s2 = beta * beta * kappa * kappa;
    std::mt19937_64 rng(12);
    // leaves (0,0), (0,1), (1,0) of a binary tree
    std::vector<double> q00, q01, q10, y00, y01, y10;
    for (int t = 0; t < 200000; ++t) {
        const auto tree = sample_tree_gaussians(2, 2, rng);
        const auto q = q_all(tree, zeta, beta, kappa);
        const auto y = y_all(tree, zeta, beta, kappa);
        q00.push_back(q[0]);
        q01.push_back(q[1]);
        q10.push_back(q[2]);
        y00.push_back(y[0]);
        y01.push_back(y[1]);
        y10.push_back(y[2]);
        if (t < 5) {
            for (std::size_t i = 0; i < 4; ++i) {
                const std::vector<int> path{static_cast<int>(i / 2), static_cast<int>(i % 2)};
                CHECK(q_leaf(path, tree, zeta, beta, kappa) == doctest::Approx(q[i]).epsilon(1e-14));
                CHECK(y_leaf(path, tree, zeta, beta, kappa) == doctest::Approx(y[i]).epsilon(1e-14));
            }
        }
    }
    auto cov = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s / a.size();
    };
    // Var q = s2 D, Cov(q at overlap b_1) = s2 b_1, independent across the root
    CHECK(cov(q00, q00) == doctest::Approx(s2 * 1.1).epsilon(0.02));
    CHECK(cov(q00, q01) == doctest::Approx(s2 * 0.4).epsilon(0.03));
    CHECK(std::abs(cov(q00, q10)) < 0.01);
    CHECK(cov(y00, y00) == doctest::Approx(s2 * 1.21 / 2.0).epsilon(0.02));
    CHECK(cov(y00, y01) == doctest::Approx(s2 * 0.16 / 2.0).epsilon(0.04));
    CHECK(std::abs(cov(y00, y10)) < 0.01);

    const auto tree = sample_tree_gaussians(2, 3, rng);
    for (double v : q_all(tree, zeta, beta, 0.0)) CHECK(v == 0.0);
    for (double v : y_all(tree, zeta, beta, 0.0)) CHECK(v == 0.0);
}

TEST_CASE("verify: constant leaf is exact")
{
    const parisi::ParisiMeasure zeta({0.4}, {0.0, 1.0});
    VerifyOptions o;
    o.replicas = 5;
    o.branching = 200;
    const auto r = verify_prpc(zeta, model_args(0.3), Leaf::constant(0.83), o);
    CHECK(std::abs(r.mc_estimate - 0.83) < 1e-12);
    CHECK(r.recursion_value == 0.83);
}

TEST_CASE("verify: linear and y leaves against their closed forms")
{
    const parisi::ParisiMeasure zeta({0.3, 0.6}, {0.0, 0.5, 1.2});
    VerifyOptions o;
    o.branching = 300;
    o.replicas = 200;
    o.seed = 2;
    const auto lin = verify_prpc(zeta, model_args(0.3), Leaf::linear({0.9, -0.5}, 0.2), o);
    CHECK(lin.recursion_value == doctest::Approx(0.2 + 0.5 * 0.3 * 0.81 + 0.5 * 0.6 * 0.25));
    MESSAGE("linear z=" << lin.z_score);
    CHECK(std::abs(lin.z_score) < 3.5);

    const auto y = verify_prpc(zeta, model_args(0.3), Leaf::y_process(), o);
    CHECK(y.recursion_value == doctest::Approx(parisi::correction_sum_form(zeta, model_args(0.3).model)));
    MESSAGE("y z=" << y.z_score);
    CHECK(std::abs(y.z_score) < 3.5);
    CHECK(y.retained_mass_estimate > 0.9);
}

TEST_CASE("verify: mu_beta leaf matches the recursion")
{
    const parisi::ParisiMeasure zeta({0.45}, {0.0, 1.4});
    VerifyOptions o;
    o.seed = 7;
    const auto r = verify_prpc(zeta, model_args(0.3), Leaf::mu_beta(), o);
    MESSAGE("mu_beta K=1 mc=" << r.mc_estimate << " rec=" << r.recursion_value << " z=" << r.z_score);
    CHECK(std::abs(r.z_score) < 3.5);
    CHECK(r.std_error > 0.0);

    const parisi::ParisiMeasure two({0.3, 0.55}, {0.0, 0.6, 1.4});
    o.branching = 300;
    const auto r2 = verify_prpc(two, model_args(0.3), Leaf::mu_beta(), o);
    MESSAGE("mu_beta K=2 z=" << r2.z_score);
    CHECK(std::abs(r2.z_score) < 3.5);
}

TEST_CASE("doubling N increases the retained mass")
{
    const parisi::ParisiMeasure zeta({0.7}, {0.0, 1.0});
    VerifyOptions o;
    o.replicas = 100;
    double prev = 0.0;
    for (int n : {100, 200, 400, 800}) {
        o.branching = n;
        const auto r = verify_prpc(zeta, model_args(0.3), Leaf::y_process(), o);
        CHECK(r.retained_mass_estimate > prev);
        prev = r.retained_mass_estimate;
    }
    // truncated Gamma tail: mass fraction ~ N^(1 - 1/lambda)
    CHECK(prev < 1.0);
    CHECK(1.0 - prev < 3.0 * std::pow(800.0, 1.0 - 1.0 / 0.7));
}

TEST_CASE("linear leaf helper and input checks")
{
    CHECK(linear_leaf_x0(std::vector<double>{0.5}, std::vector<double>{2.0}, 1.0) == 2.0);
    CHECK_THROWS_AS(linear_leaf_x0(std::vector<double>{0.5}, std::vector<double>{}, 1.0), ValidationError);
    const parisi::ParisiMeasure zeta({0.4}, {0.0, 1.0});
    VerifyOptions o;
    o.replicas = 1;
    CHECK_THROWS_AS(verify_prpc(zeta, model_args(0.3), Leaf::y_process(), o), ValidationError);
    CHECK_THROWS_AS(verify_prpc(zeta, model_args(0.3), Leaf::linear({1.0, 2.0}, 0.0), {}), ValidationError);
}
