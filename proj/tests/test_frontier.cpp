#include "lvsg/error.hpp"
#include "lvsg/frontier.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace lvsg;
using namespace lvsg::frontier;

namespace {

const double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

// Values computed once from the Boost-quadrature oracle and frozen.
constexpr double kRootAlpha1 = 0.7323389528744; // unique root of x = f(x)
constexpr double kFrontierAt04 = 0.80307938495; // alpha with lambda_+(alpha, 0.4) = 1

std::vector<double> grid(double lo, double hi, int points)
{
    std::vector<double> out;
    for (int i = 0; i < points; ++i) out.push_back(lo + (hi - lo) * i / (points - 1));
    return out;
}

} // namespace

TEST_CASE("closed forms of the Gaussian moments match adaptive quadrature")
{
    for (int i = -5; i <= 5; ++i) {
        const double x = i;
        CAPTURE(x);
        CHECK(gauss_d(x) == doctest::Approx(oracle::gauss_d(x)).epsilon(1e-10));
        CHECK(std::abs(gauss_f(x) - oracle::gauss_f(x)) < 1e-10);
        CHECK(std::abs(gauss_g(x) - oracle::gauss_g(x)) < 1e-10);
    }
}

TEST_CASE("gauss_d reference values")
{
    CHECK(std::abs(gauss_d(0.0) - 0.5) < 1e-14);
    CHECK(std::abs(gauss_d(10.0) - 101.0) < 1e-6);
    CHECK(gauss_d(-40.0) < 1e-100);
    CHECK(gauss_d(-40.0) >= 0.0);
    // the log form keeps going where d itself underflows
    CHECK(std::isfinite(log_gauss_d(-200.0)));
    CHECK(log_gauss_d(-200.0) < log_gauss_d(-100.0));
}

TEST_CASE("gauss_d is positive and nondecreasing")
{
    double prev = 0.0;
    for (double x : grid(-30.0, 30.0, 601)) {
        const double v = std::exp(log_gauss_d(x));
        CHECK(v > 0.0);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("f: value at zero, limits and monotonicity")
{
    CHECK(std::abs(gauss_f(0.0) - 1.0 / std::sqrt(std::numbers::pi)) < 1e-12);
    // f(x) = 1 - 1/(2x^2) + O(x^-4) at +inf
    CHECK(std::abs(gauss_f(1e7) - 1.0) < 1e-12);
    CHECK(std::abs(gauss_f(40.0) - 40.0 / std::sqrt(1601.0)) < 1e-14);
    CHECK(gauss_f(-40.0) < 1e-100);
    double prev = 0.0;
    // below about -52 f underflows in double precision
    for (double x : grid(-50.0, 20.0, 701)) {
        const double v = gauss_f(x);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("g: value at zero, shape and tails")
{
    CHECK(std::abs(gauss_g(0.0) - kInvSqrt2) < 1e-14);
    // the lower tail is Gaussian; the upper one is only g(x) = Phi(x) / sqrt(1 + x^2 + ...) ~ 1/x
    CHECK(gauss_g(-50.0) < 1e-6);
    CHECK(std::abs(gauss_g(50.0) - 1.0 / std::sqrt(2501.0)) < 1e-14);
    CHECK(gauss_g(1e7) < 1e-6);
    const double h = 1e-5;
    CHECK(std::abs((gauss_g(h) - gauss_g(-h)) / (2 * h)) < 1e-8);
    double prev = 0.0;
    for (double x : grid(-20.0, 0.0, 201)) {
        const double v = gauss_g(x);
        CHECK(v > 0.0);
        CHECK(v >= prev);
        prev = v;
    }
    for (double x : grid(0.0, 20.0, 201)) {
        const double v = gauss_g(x);
        CHECK(v > 0.0);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("sqrt d = x f + g and g' = -x f' on a grid")
{
    for (double x : grid(-5.0, 5.0, 21)) {
        CAPTURE(x);
        CHECK(std::abs(std::sqrt(gauss_d(x)) - (x * gauss_f(x) + gauss_g(x))) < 1e-10);
        const double h = 1e-4;
        const double fp = (gauss_f(x + h) - gauss_f(x - h)) / (2 * h);
        const double gp = (gauss_g(x + h) - gauss_g(x - h)) / (2 * h);
        CHECK(std::abs(gp + x * fp) < 1e-6);
    }
}

TEST_CASE("q(x) = f(x)/x decreases on each half line")
{
    double prev = gauss_f(-30.0) / -30.0;
    for (double x : grid(-30.0, -0.01, 400)) {
        const double q = gauss_f(x) / x;
        CHECK(q <= prev);
        prev = q;
    }
    prev = gauss_f(0.01) / 0.01;
    for (double x : grid(0.01, 30.0, 400)) {
        const double q = gauss_f(x) / x;
        CHECK(q <= prev);
        prev = q;
    }
}

TEST_CASE("the grid maximum of r_alpha sits at the fixed point")
{
    for (double alpha : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
        CAPTURE(alpha);
        double best_x = 0.0;
        double best = -1e300;
        for (double x : grid(-10.0, 10.0, 200001)) {
            const double r = r_alpha(alpha, x);
            if (r > best) {
                best = r;
                best_x = x;
            }
        }
        CHECK(std::abs(best_x - solve_c({1.0, alpha})) < 2e-4);
    }
}

TEST_CASE("solve_c: sign, zero and the alpha = 1 root")
{
    CHECK(solve_c({1.0, 0.0}) == 0.0);
    CHECK(solve_c({1.0, -2.0}) < 0.0);
    CHECK(solve_c({0.5, 3.0}) > 0.0);
    const double c = solve_c({1.0, 1.0});
    CHECK(std::abs(c - kRootAlpha1) < 1e-12);
    CHECK(std::abs(c - gauss_f(c)) < 1e-12);
    for (double alpha : {-40.0, -3.0, 0.2, 7.0, 45.0}) {
        for (double kappa : {0.05, 0.7, 2.0}) {
            const double r = solve_c({kappa, alpha});
            CHECK(std::abs(r - alpha / kappa * gauss_f(r)) < 1e-10 * std::max(1.0, std::abs(alpha / kappa)));
        }
    }
}

TEST_CASE("lambda_plus anchors")
{
    for (double kappa : {0.1, 0.5, kInvSqrt2, 2.0}) {
        CHECK(std::abs(lambda_plus({kappa, 0.0}).lambda_plus - kappa * std::numbers::sqrt2) < 1e-10);
    }
    for (double alpha : {-2.0, -1.0, 1.0, 2.0}) {
        CHECK(std::abs(lambda_plus({1e-4, alpha}).lambda_plus - std::max(0.0, alpha)) < 1e-3);
    }
}

TEST_CASE("lambda_plus point carries its own fixed point")
{
    const auto p = lambda_plus({0.4, 0.7});
    CHECK(std::abs(p.c - 0.7 / 0.4 * gauss_f(p.c)) < 1e-11);
    const double f = gauss_f(p.c);
    CHECK(std::abs(p.lambda_plus - (0.7 * f * f + 0.8 * gauss_g(p.c))) < 1e-14);
}

TEST_CASE("scaling identity lambda_+(alpha, kappa) = kappa lambda_+(alpha / kappa, 1)")
{
    for (double alpha : {-2.0, -0.3, 0.0, 0.5, 2.0}) {
        for (double kappa : {0.1, 0.5, 1.0, 3.0}) {
            const double lhs = lambda_plus({kappa, alpha}).lambda_plus;
            const double rhs = kappa * lambda_plus({1.0, alpha / kappa}).lambda_plus;
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }
    CHECK(std::abs(lambda_plus({1.0, 2.0}).lambda_plus - 2.0 * lambda_plus({0.5, 1.0}).lambda_plus) < 1e-10);
}

TEST_CASE("lambda_plus increases in alpha at fixed kappa")
{
    for (double kappa : {0.05, 0.3, 0.7}) {
        double prev = -1.0;
        for (double alpha : grid(-10.0, 10.0, 401)) {
            const double v = lambda_plus({kappa, alpha}).lambda_plus;
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("frontier curve anchors")
{
    CHECK(std::abs(frontier_alpha(kInvSqrt2).alpha) < 1e-9);
    CHECK(std::abs(frontier_alpha(1e-4).alpha - 1.0) < 1e-3);
    const auto p = frontier_alpha(0.4);
    CHECK(std::abs(p.alpha - kFrontierAt04) < 1e-9);
    CHECK(std::abs(p.lambda_plus - 1.0) < 1e-10);

    const std::vector<double> kappas = {0.1, 0.3, 0.5, 0.7};
    const auto curve = frontier_curve(kappas);
    REQUIRE(curve.size() == 4);
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].alpha < curve[i - 1].alpha);
}

TEST_CASE("frontier rejects kappa outside the range and reports a missing sign change")
{
    const std::vector<double> bad = {0.8};
    CHECK_THROWS_AS(frontier_curve(bad), ValidationError);
    const std::vector<double> zero = {0.0};
    CHECK_THROWS_AS(frontier_curve(zero), ValidationError);
    // lambda_+(alpha, 30) >= 30 sqrt 2 at alpha = 0 and never reaches 1 from below on the bracket
    CHECK_THROWS_AS(frontier_alpha(30.0), ConvergenceError);
}

TEST_CASE("Sudakov slice bound")
{
    CHECK(std::abs(sudakov_bound(1.0 / std::sqrt(std::numbers::pi), {1.0, 0.0}) - std::numbers::sqrt2) < 1e-10);
    for (double alpha : {-2.0, 0.0, 2.0}) {
        const auto top = lambda_plus({1.0, alpha});
        CHECK(std::abs(sudakov_bound(gauss_f(top.c), {1.0, alpha}) - top.lambda_plus) < 1e-10);
        for (int i = 1; i <= 19; ++i) {
            const double s = i / 20.0;
            CHECK(sudakov_bound(s, {1.0, alpha}) <= top.lambda_plus + 1e-10);
        }
    }
    CHECK_THROWS_AS(sudakov_bound(0.0, {1.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(sudakov_bound(1.0, {1.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(sudakov_bound(0.5, {0.5, 0.0}), ValidationError);
}

TEST_CASE("ensemble validation")
{
    CHECK_THROWS_AS(solve_c({0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(solve_c({-1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(lambda_plus({1.0, std::nan("")}), ValidationError);
}
