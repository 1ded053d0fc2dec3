#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wcl/errors.hpp"
#include "wcl/quadrature.hpp"

using namespace wcl;

TEST_CASE("polynomials and oscillatory integrands on finite intervals") {
    const QuadResult cubic = integrate([](double x) { return Complex(x * x * x, 0.0); },
                                       0.0, 2.0);
    CHECK(std::abs(cubic.value.real() - 4.0) < 1e-13);

    const QuadResult osc = integrate(
        [](double x) { return std::exp(Complex(0.0, 5.0) * x); }, 0.0, 1.0);
    const Complex expected = (std::exp(Complex(0.0, 5.0)) - 1.0) / Complex(0.0, 5.0);
    CHECK(std::abs(osc.value - expected) < 1e-12);
    CHECK(osc.error < 1e-10);
}

TEST_CASE("kinked integrand needs refinement but converges") {
    const QuadResult kink =
        integrate([](double x) { return Complex(std::abs(x - 0.3), 0.0); }, 0.0, 1.0);
    const double expected = 0.5 * (0.3 * 0.3 + 0.7 * 0.7);
    CHECK(std::abs(kink.value.real() - expected) < 1e-12);
}

TEST_CASE("half-line transform integrates decaying kernels") {
    const QuadResult exp_int =
        integrate_half_line([](double t) { return Complex(std::exp(-t), 0.0); }, 0.0);
    CHECK(std::abs(exp_int.value.real() - 1.0) < 1e-10);

    const QuadResult shifted =
        integrate_half_line([](double t) { return Complex(std::exp(-t), 0.0); }, 2.0);
    CHECK(std::abs(shifted.value.real() - std::exp(-2.0)) < 1e-10);

    const QuadResult lorentz = integrate_half_line(
        [](double t) { return Complex(1.0 / (1.0 + t * t), 0.0); }, 0.0);
    CHECK(std::abs(lorentz.value.real() - M_PI / 2.0) < 1e-9);
}

TEST_CASE("non-integrable input raises an integration error") {
    CHECK_THROWS_AS(
        integrate([](double x) { return Complex(1.0 / x, 0.0); }, 0.0, 1.0, 1e-10, 1e-14, 50),
        IntegrationError);
}

TEST_CASE("empty interval integrates to zero") {
    const QuadResult q = integrate([](double) { return Complex(1.0, 1.0); }, 2.0, 2.0);
    CHECK(q.value == Complex{0.0, 0.0});
}

TEST_CASE("richardson extrapolation removes the leading lambda^2 error") {
    // v(lambda) = 1 + lambda^2 - 0.25 lambda^4 at lambda = 1, 1/2, 1/4, 1/8
    std::vector<Complex> values;
    for (double lambda : {1.0, 0.5, 0.25, 0.125})
        values.emplace_back(1.0 + lambda * lambda - 0.25 * std::pow(lambda, 4.0), 0.0);
    const Complex limit = richardson_extrapolate(values, 2.0);
    CHECK(std::abs(limit - 1.0) < 1e-12);
    CHECK(std::abs(values.back() - 1.0) > 1e-3);
}
