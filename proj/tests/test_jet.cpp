#include <doctest.h>

#include <cmath>

#include "martinkern/errors.hpp"
#include "martinkern/jet.hpp"

using namespace martinkern;

TEST_SUITE("jet") {

TEST_CASE("variable carries value and unit slope") {
    const Jet x = Jet::variable(3, {2.0, 1.0});
    CHECK(x.value() == Complex(2.0, 1.0));
    CHECK(x[1] == Complex(1.0));
    CHECK(x[2] == Complex(0.0));
    CHECK(x.order() == 3);
}

TEST_CASE("reciprocal matches the geometric series") {
    // 1/(1 - t) around t = 0.5: coefficients 2^{k+1}
    const Jet t = Jet::variable(5, 0.5);
    const Jet g = Complex{1.0} / (1.0 - t);
    for (int k = 0; k <= 5; ++k) {
        CHECK(std::abs(g[k] - std::pow(2.0, k + 1)) < 1e-12);
    }
}

TEST_CASE("derivative is factorial times coefficient") {
    // t^4 at t = 1: derivatives 1, 4, 12, 24, 24
    const Jet p = Jet::variable(4, 1.0).pow(4);
    const double expected[] = {1, 4, 12, 24, 24};
    for (int r = 0; r <= 4; ++r) {
        CHECK(std::abs(p.derivative(r) - expected[r]) < 1e-12);
    }
}

TEST_CASE("negative powers agree with repeated division") {
    const Jet t = Jet::variable(4, {0.7, -0.2});
    const Jet a = t.pow(-3);
    const Jet b = Complex{1.0} / (t * t * t);
    CHECK(a.distance(b) < 1e-12);
}

TEST_CASE("square root squares back") {
    const Jet t = Jet::variable(4, {0.3, 0.8});
    const Jet s = sqrt(1.0 - t * t);
    CHECK((s * s).distance(1.0 - t * t) < 1e-12);
    CHECK(s.value().real() >= 0.0);
}

TEST_CASE("square root derivative matches finite differences") {
    const double h = 1e-5;
    const auto f = [](double v) { return std::sqrt(1.0 + v * v); };
    const Jet t = Jet::variable(2, 0.6);
    const Jet s = sqrt(1.0 + t * t);
    const double fd1 = (f(0.6 + h) - f(0.6 - h)) / (2 * h);
    const double fd2 = (f(0.6 + h) - 2 * f(0.6) + f(0.6 - h)) / (h * h);
    CHECK(std::abs(s.derivative(1) - fd1) < 1e-8);
    CHECK(std::abs(s.derivative(2) - fd2) < 1e-4);
}

TEST_CASE("division by a vanishing value is singular") {
    const Jet zero(2);
    CHECK_THROWS_AS(Complex{1.0} / zero, Error);
    try {
        (void)(Complex{1.0} / zero);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularJet);
    }
}

TEST_CASE("mixed orders truncate to the smaller") {
    const Jet a = Jet::variable(4, 1.0);
    const Jet b = Jet::variable(2, 2.0);
    CHECK((a * b).order() == 2);
    CHECK((a + b).order() == 2);
}

TEST_CASE("differentiated lowers the order") {
    const Jet t = Jet::variable(3, 2.0);
    const Jet cube = t.pow(3);
    const Jet d = cube.differentiated();
    CHECK(d.order() == 2);
    CHECK(std::abs(d.value() - 12.0) < 1e-12);
    CHECK(std::abs(d.derivative(1) - 12.0) < 1e-12);
    CHECK(std::abs(d.derivative(2) - 6.0) < 1e-12);
}

TEST_CASE("factorial") {
    CHECK(factorial(0) == 1.0);
    CHECK(factorial(5) == 120.0);
}

}
