#include "cvtel/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace cvtel;
using doctest::Approx;

TEST_CASE("Gauss-Hermite nodes and weights for small orders") {
    SUBCASE("one point") {
        const auto r = quad::gauss_hermite(1);
        CHECK(r.nodes(0) == Approx(0.0));
        CHECK(r.weights(0) == Approx(std::sqrt(M_PI)).epsilon(1e-14));
    }
    SUBCASE("two points") {
        const auto r = quad::gauss_hermite(2);
        CHECK(r.nodes(0) == Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-13));
        CHECK(r.nodes(1) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
        CHECK(r.weights(0) == Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-13));
    }
}

TEST_CASE("Gauss-Hermite integrates even moments exactly") {
    const auto r = quad::gauss_hermite(12);
    // int y^{2k} e^{-y^2} dy = Gamma(k + 1/2)
    double expected = std::sqrt(M_PI);  // k = 0
    for (int k = 0; k <= 8; ++k) {
        double s = 0.0;
        for (int i = 0; i < r.nodes.size(); ++i)
            s += r.weights(i) * std::pow(r.nodes(i), 2 * k);
        CHECK(s == Approx(expected).epsilon(1e-12));
        expected *= (k + 0.5);
    }
}

TEST_CASE("trapezoid rule on a decaying Gaussian is spectrally accurate") {
    const auto r = quad::uniform_trapezoid(10.0, 401);
    double s = 0.0;
    for (int i = 0; i < r.nodes.size(); ++i)
        s += r.weights(i) * std::exp(-r.nodes(i) * r.nodes(i));
    CHECK(s == Approx(std::sqrt(M_PI)).epsilon(1e-13));
}
