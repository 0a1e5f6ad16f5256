#include <doctest.h>

#include <cmath>
#include <random>

#include "martinkern/errors.hpp"
#include "martinkern/isotropic.hpp"
#include "martinkern/polyharmonic.hpp"
#include "support.hpp"

using namespace martinkern;
using namespace testing;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::Parse;
}

Complex quadratic_residual(const IsotropicParams& p, Complex F) {
    const double w = 1.0 / (p.q + 1.0);
    return p.lambda * F - w - p.q * w * F * F;
}

} // namespace

TEST_SUITE("isotropic") {

TEST_CASE("F(1) = 1/q") {
    for (int q : {2, 3, 5}) {
        CHECK(std::abs(closed_F(make_isotropic(q, 1.0), 0).value() - 1.0 / q) < 1e-12);
    }
}

TEST_CASE("closed form agrees with the solver including derivatives") {
    for (int q : {2, 3, 5}) {
        for (double lambda : {1.2, 2.0, -1.3}) {
            const auto closed = closed_F(make_isotropic(q, lambda), 2);
            const auto spec = homogeneous_tree_spec(q);
            const auto solved = solve_F_up(spec, lambda, 2).f_up(spec.type_index("A"));
            for (int r = 0; r <= 2; ++r) {
                CHECK(std::abs(closed.derivative(r) - solved.derivative(r)) < 1e-10);
            }
        }
    }
}

TEST_CASE("horocycle index") {
    CHECK(horocycle_index(VertexPath{}, VertexPath{1, 0}) == 0);
    CHECK(horocycle_index(VertexPath{1, 0, 1}, VertexPath{1, 0, 1, 1}) == -3);
    CHECK(horocycle_index(VertexPath{0, 1}, VertexPath{1}) == 2);
    CHECK(horocycle_index(VertexPath{0, 1, 1}, VertexPath{0, 0}) == 1);
    CHECK(code_of([] { horocycle_index(VertexPath{0, 1}, VertexPath{0}); }) == ErrorCode::ArcTooCoarse);
}

TEST_CASE("diagonal coefficients are powers of f") {
    for (Complex lambda : {Complex{1.5, 0.0}, Complex{0.4, 0.9}}) {
        const auto params = make_isotropic(2, lambda);
        const auto c = horocycle_coeffs(params, 4);
        CHECK(std::abs(c.f - closed_f(params, 0).value()) < 1e-12);
        CHECK(c.at(0, 0) == Complex{1.0});
        for (int r = 1; r <= 3; ++r) CHECK(std::abs(c.at(r, r) - std::pow(c.f, r)) < 1e-12);
    }
    const auto c3 = horocycle_coeffs(make_isotropic(2, 1.5), 3);
    CHECK(std::abs(c3.determinant() - std::pow(c3.f, 3)) < 1e-12);
    CHECK(std::abs(c3.determinant()) > 0.0);
}

TEST_CASE("f at lambda = 1 on T_2") {
    CHECK(std::abs(closed_f(make_isotropic(2, 1.0), 0).value() - (-3.0)) < 1e-12);
    const auto c = horocycle_coeffs(make_isotropic(2, 1.0), 3);
    const VertexPath x{0, 1}, arc{1};
    CHECK(std::abs(isotropic_kernel(make_isotropic(2, 1.0), c, x, arc, 0) - 0.25) < 1e-12);
    CHECK(std::abs(isotropic_kernel(make_isotropic(2, 1.0), c, x, arc, 1) - (-1.5)) < 1e-12);
}

TEST_CASE("closed kernel derivatives match the general solver") {
    std::mt19937_64 rng(21);
    for (int q : {2, 3}) {
        const auto spec = homogeneous_tree_spec(q);
        for (Complex lambda : {Complex{1.3, 0.0}, Complex{-1.1, 0.5}, Complex{0.3, 0.8}}) {
            const auto params = make_isotropic(q, lambda);
            const auto coeffs = horocycle_coeffs(params, 4);
            const auto table = solve_F_up(spec, lambda, 3);
            for (int trial = 0; trial < 6; ++trial) {
                const auto x = random_vertex(spec, trial % 4, rng);
                const auto arc = random_vertex(spec, 4, rng);
                const auto k = martin_kernel(table, x, arc);
                for (int r = 0; r <= 3; ++r) {
                    CHECK(std::abs(isotropic_kernel(params, coeffs, x, arc, r) - k.derivative(r)) <
                          1e-8 * std::max(1.0, std::abs(k.derivative(r))));
                }
            }
        }
    }
}

TEST_CASE("jet derivatives match central differences") {
    const double h = 1e-5;
    for (int q : {2, 3}) {
        for (double lambda : {1.1, 1.6, -1.4}) {
            const auto jet = closed_F(make_isotropic(q, lambda), 3);
            const auto up = closed_F(make_isotropic(q, lambda + h), 2);
            const auto down = closed_F(make_isotropic(q, lambda - h), 2);
            for (int r = 1; r <= 3; ++r) {
                const Complex fd = (up.derivative(r - 1) - down.derivative(r - 1)) / (2 * h);
                CHECK(std::abs(fd - jet.derivative(r)) < 1e-6);
            }
        }
    }
}

TEST_CASE("closed form solves the quadratic") {
    for (int q : {2, 3, 5}) {
        for (Complex lambda : {Complex{1.0, 0.0}, Complex{0.0, 0.5}, Complex{-0.9, 0.2}, Complex{0.5, -1e-3},
                               Complex{-3.0, 0.0}, Complex{0.2, 2.0}}) {
            const auto params = make_isotropic(q, lambda);
            const Complex F = closed_F(params, 0).value();
            CHECK(std::abs(quadratic_residual(params, F)) < 1e-10);
            CHECK(std::abs(F * F) < 1.0);
        }
    }
}

TEST_CASE("principal branch is admissible off the cut") {
    for (int q : {2, 3}) {
        for (int i = -6; i <= 6; ++i) {
            for (int j = -6; j <= 6; ++j) {
                const Complex lambda{0.5 * i + 0.01, 0.5 * j + 0.02};
                const auto params = make_isotropic(q, lambda);
                CHECK(uses_principal_branch(params));
                // F'/F from the jet agrees with the closed expression for f
                const auto jet = closed_F(params, 1);
                CHECK(std::abs(jet.derivative(1) / jet.value() - closed_f(params, 0).value()) <
                      1e-10 * std::max(1.0, std::abs(closed_f(params, 0).value())));
            }
        }
    }
}

TEST_CASE("F is decreasing between 0 and 1 above rho") {
    for (int q : {2, 3, 5}) {
        const double rho = 2.0 * std::sqrt(static_cast<double>(q)) / (q + 1.0);
        double prev = 1.0;
        for (int i = 1; i <= 20; ++i) {
            const double lambda = rho + 1e-6 + (3.0 - rho) * i / 20.0;
            const double F = closed_F(make_isotropic(q, lambda), 0).value().real();
            CHECK(F > 0.0);
            CHECK(F < 1.0);
            CHECK(F < prev);
            prev = F;
        }
    }
}

TEST_CASE("horocycle basis round trip and evaluation") {
    std::mt19937_64 rng(23);
    for (int q : {2, 3}) {
        const auto spec = homogeneous_tree_spec(q);
        for (Complex lambda : {Complex{1.4, 0.0}, Complex{0.6, -0.7}}) {
            const auto params = make_isotropic(q, lambda);
            const auto table = solve_F_up(spec, lambda, 2);
            const auto coeffs = horocycle_coeffs(params, 3);
            PolyRepresentation rep{lambda, {}};
            for (int r = 0; r < 3; ++r) rep.distributions.push_back(random_distribution(spec, 2, rng));

            const auto basis = to_horocycle_basis(spec, rep, coeffs);
            CHECK(max_arc_diff(spec, basis[0], rep.distributions[0]) < 1e-15);
            const auto back = from_horocycle_basis(spec, lambda, basis, coeffs);
            for (int r = 0; r < 3; ++r) {
                CHECK(max_arc_diff(spec, back.distributions[static_cast<size_t>(r)],
                                   rep.distributions[static_cast<size_t>(r)]) < 1e-10);
            }
            for (int i = 0; i < 20; ++i) {
                const auto x = random_vertex(spec, i % 4, rng);
                const Complex want = synthesize(rep, table, x);
                CHECK(std::abs(horocycle_evaluate(spec, params, basis, x) - want) < 1e-8 * std::max(1.0, std::abs(want)));
            }
        }
    }
}

TEST_CASE("order one at lambda = 1 is the classical representation") {
    std::mt19937_64 rng(29);
    const auto spec = homogeneous_tree_spec(3);
    const auto params = make_isotropic(3, 1.0);
    const auto nu = random_distribution(spec, 2, rng);
    const auto basis = to_horocycle_basis(spec, PolyRepresentation{1.0, {nu}}, horocycle_coeffs(params, 1));
    for (const auto& x : spec.ball(2)) {
        Complex want{};
        for (int i = 0; i <= x.depth(); ++i) {
            const Complex region = i == x.depth() ? arc_value(spec, nu, x)
                                                  : arc_value(spec, nu, x.prefix(i)) - arc_value(spec, nu, x.prefix(i + 1));
            want += std::pow(3.0, 2 * i - x.depth()) * region;
        }
        CHECK(std::abs(horocycle_evaluate(spec, params, basis, x) - want) < 1e-12);
    }
}

TEST_CASE("parameter errors") {
    CHECK(code_of([] { make_isotropic(1, 2.0); }) == ErrorCode::InvalidSpec);
    CHECK(code_of([] { make_isotropic(2, 0.5); }) == ErrorCode::BranchCut);
    CHECK(code_of([] { make_isotropic(2, Complex{0.3, 1e-12}); }) == ErrorCode::BranchCut);
    const double rho = 2.0 * std::sqrt(2.0) / 3.0;
    CHECK(code_of([&] { make_isotropic(2, rho); }) == ErrorCode::BranchCut);
    CHECK(code_of([&] { make_isotropic(2, -rho - 1e-10); }) == ErrorCode::BranchCut);
    CHECK_NOTHROW(make_isotropic(2, rho + 1e-6));
}

}
