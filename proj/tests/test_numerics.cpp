#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stopdur/numerics.hpp"
#include "stopdur/rng.hpp"

using namespace stopdur;

namespace {
constexpr double euler_gamma = 0.57721566490153286060;
}

TEST_CASE("digamma known values") {
    CHECK(std::fabs(digamma(1.0) + euler_gamma) < 1e-13);
    // psi(1/2) = -gamma - 2 ln 2
    CHECK(std::fabs(digamma(0.5) + euler_gamma + 2.0 * std::log(2.0)) < 1e-13);
    // psi(n+1) = H_n - gamma
    CHECK(std::fabs(digamma(10.0) - (harmonic(9) - euler_gamma)) < 1e-13);
    CHECK(std::fabs(digamma(101.0) - (harmonic(100) - euler_gamma)) < 1e-13);
}

TEST_CASE("digamma and trigamma recurrences") {
    for (double x : {0.5, 1.0, 2.0, 5.5, 100.0}) {
        CHECK(std::fabs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-12);
        CHECK(std::fabs(trigamma(x + 1.0) - trigamma(x) + 1.0 / (x * x)) < 1e-12);
    }
}

TEST_CASE("trigamma known values") {
    const double pi = 3.14159265358979323846;
    CHECK(std::fabs(trigamma(1.0) - pi * pi / 6.0) < 1e-13);
    CHECK(std::fabs(trigamma(0.5) - pi * pi / 2.0) < 1e-13);
}

TEST_CASE("digamma trigamma domain errors") {
    CHECK_THROWS_AS(digamma(0.0), std::domain_error);
    CHECK_THROWS_AS(digamma(-3.2), std::domain_error);
    CHECK_THROWS_AS(trigamma(0.0), std::domain_error);
    CHECK_THROWS_AS(trigamma(-1.0), std::domain_error);
}

TEST_CASE("harmonic numbers") {
    CHECK(harmonic(0) == 0.0);
    CHECK(harmonic(1) == 1.0);
    CHECK(std::fabs(harmonic(4) - 25.0 / 12.0) < 1e-15);
    CHECK(std::fabs(harmonic(1000) - (digamma(1001.0) + euler_gamma)) < 1e-12);
}

TEST_CASE("find_root basics") {
    auto sq = [](double x) { return x * x - 0.25; };
    CHECK(std::fabs(find_root(sq, {0.0, 1.0}) - 0.5) < 1e-12);

    // e^c = 1 + 2c, positive root
    auto g = [](double c) { return std::exp(c) - 1.0 - 2.0 * c; };
    CHECK(std::fabs(find_root(g, {1.0, 3.0}) - 1.2564312086261697) < 1e-11);

    // 2 ln m + 2/m = 3
    auto h = [](double m) { return 2.0 * std::log(m) + 2.0 / m - 3.0; };
    CHECK(std::fabs(find_root(h, {2.0, 5.0}) - 3.3144458236686756) < 1e-11);
}

TEST_CASE("find_root error contracts") {
    auto pos = [](double) { return 1.0; };
    CHECK_THROWS_AS(find_root(pos, {0.0, 1.0}), std::invalid_argument);

    auto sq = [](double x) { return x * x - 0.25; };
    CHECK_THROWS_AS(find_root(sq, {0.6, 1.0}), std::invalid_argument);
    // not enough iterations for the requested tol
    root_bracket tight{0.0, 1.0, 1e-12, 3};
    CHECK_THROWS_AS(find_root(sq, tight), numerical_error);
    // endpoint roots are returned as-is
    auto lin = [](double x) { return x - 1.0; };
    CHECK(find_root(lin, {0.0, 1.0}) == 1.0);
}

TEST_CASE("find_root result is inside the bracket") {
    rng_stream gen(7, 0);
    for (int i = 0; i < 50; ++i) {
        const double r = 0.05 + 0.9 * gen.next_double();
        auto f = [r](double x) { return std::atan(3.0 * (x - r)); };
        const double x = find_root(f, {0.0, 1.0});
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
        CHECK(std::fabs(x - r) < 1e-10);
    }
}

TEST_CASE("integrate polynomials and transcendentals") {
    auto x2 = [](double x) { return x * x; };
    CHECK(std::fabs(integrate(x2, 0.0, 1.0) - 1.0 / 3.0) < 1e-12);

    const double pi = 3.14159265358979323846;
    CHECK(std::fabs(integrate([](double x) { return std::sin(x); }, 0.0, pi) - 2.0) < 1e-9);

    // symmetric integrand must not be accepted from the unsplit estimate
    CHECK(std::fabs(integrate([](double x) { return std::sin(x); }, -1.0, 1.0)) < 1e-10);
}

TEST_CASE("integrate kinked integrand") {
    auto kink = [](double x) { return std::fabs(x - 0.3); };
    // exact: 0.3^2/2 + 0.7^2/2
    CHECK(std::fabs(integrate(kink, 0.0, 1.0) - 0.29) < 1e-9);
}

TEST_CASE("integrate additivity") {
    auto f = [](double x) { return std::exp(-x) * std::cos(5.0 * x); };
    quadrature q{1e-10, 1 << 20};
    const double whole = integrate(f, 0.0, 2.0, q);
    const double split = integrate(f, 0.0, 0.7, q) + integrate(f, 0.7, 2.0, q);
    CHECK(std::fabs(whole - split) <= 3.0 * q.abs_tol);
    // orientation flips the sign exactly
    CHECK(integrate(f, 2.0, 0.0, q) == -whole);
    CHECK(integrate(f, 1.0, 1.0, q) == 0.0);
}

TEST_CASE("integrate subdivision limit") {
    auto wild = [](double x) { return std::sin(1.0 / (x + 1e-4)); };
    quadrature q{1e-14, 8};
    CHECK_THROWS_AS(integrate(wild, 0.0, 1.0, q), numerical_error);
}

TEST_CASE("root plus quadrature pipeline") {
    // u = (1 - ln 2)/2 + (ln 2)^2 * I(ln 2), I(c) = int_1^inf exp(-c t)/t dt,
    // truncated where exp(-cT)/(cT) drops below 1e-14
    const double c = std::log(2.0);
    double t_hi = 1.0;
    while (std::exp(-c * t_hi) / (c * t_hi) >= 1e-14)
        t_hi += 1.0;
    const double i_c = integrate([c](double t) { return std::exp(-c * t) / t; },
                                 1.0, t_hi, {1e-12, 1 << 22});
    CHECK(std::fabs(i_c - 0.37867104306108795) < 1e-9);
    const double u = 0.5 * (1.0 - c) + c * c * i_c;
    CHECK(std::fabs(u - 0.33536005364227606) < 1e-9);
}

TEST_CASE("rng streams are deterministic and distinct") {
    rng_stream a(42, 0), b(42, 0), c(42, 1);
    for (int i = 0; i < 16; ++i) {
        const std::uint64_t x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != c.next_u64());
    }
    rng_stream d(43, 0);
    CHECK(a.next_u64() != d.next_u64());
}

TEST_CASE("rng doubles live in the unit interval") {
    rng_stream g(123, 9);
    double mean = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = g.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        mean += u;
    }
    mean /= n;
    CHECK(std::fabs(mean - 0.5) < 0.005);
}
