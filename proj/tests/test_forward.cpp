#include <doctest.h>

#include <cmath>
#include <random>

#include "martinkern/errors.hpp"
#include "martinkern/forward.hpp"
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

std::vector<TreeSpec> forward_specs() { return {binary_forward(), skewed_forward()}; }

std::vector<BoundaryDistribution> random_sigmas(const TreeSpec& spec, int n, std::mt19937_64& rng) {
    std::vector<BoundaryDistribution> out;
    for (int r = 0; r < n; ++r) out.push_back(random_distribution(spec, 3, rng));
    return out;
}

} // namespace

TEST_SUITE("forward-operator") {

TEST_CASE("forward specs validate") {
    for (const auto& spec : forward_specs()) CHECK(validate_forward(spec).empty());
    CHECK_FALSE(validate_forward(t2()).empty());
    const TreeSpec short_row({{"B", 0.0, {{0, 0.5}, {0, 0.4}}}}, 0);
    CHECK(validate_forward(short_row).size() == 1);
    CHECK(code_of([&] { require_forward(short_row); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("forward mass") {
    const auto spec = binary_forward();
    CHECK(forward_mass(spec, VertexPath{}) == 1.0);
    CHECK(forward_mass(spec, VertexPath{0, 1, 1}) == 0.125);
    CHECK(std::abs(forward_mass(skewed_forward(), VertexPath{1, 2, 0}) - 0.7 * 0.3 * 0.3) < 1e-16);
}

TEST_CASE("walk boundary measure is additive") {
    for (const auto& spec : forward_specs()) {
        const auto nu = forward_measure(spec, 5);
        CHECK(additivity_defect(spec, nu.values()) < 1e-15);
        CHECK(nu.total() == Complex{1.0});
    }
}

TEST_CASE("forward kernel examples") {
    const auto spec = binary_forward();
    const VertexPath x{0, 1}, arc{0, 1, 0};
    CHECK(forward_kernel(spec, VertexPath{}, arc, 2.5, 0) == Complex{1.0});
    CHECK(std::abs(forward_kernel(spec, x, arc, 1.0, 0) - 4.0) < 1e-15);
    CHECK(std::abs(forward_kernel(spec, x, arc, 1.0, 1) - 8.0) < 1e-15);
    CHECK(std::abs(forward_kernel(spec, x, arc, 1.0, 2) - 8.0) < 1e-15);
    CHECK(forward_kernel(spec, x, arc, 1.0, 3) == Complex{0.0});
    // d/dλ λ² = 2λ
    CHECK(std::abs(forward_kernel(spec, x, arc, 3.0, 1) - 2.0 * 3.0 * 4.0) < 1e-13);
    CHECK(forward_kernel(spec, VertexPath{1, 1}, arc, 1.0, 0) == Complex{0.0});
    CHECK(code_of([&] { forward_kernel(spec, x, VertexPath{0}, 1.0, 0); }) == ErrorCode::ArcTooCoarse);
    CHECK(code_of([&] { forward_kernel(spec, x, arc, 0.0, 0); }) == ErrorCode::ZeroLambda);
}

TEST_CASE("forward kernel is harmonic for Q") {
    for (const auto& spec : forward_specs()) {
        const Complex lambda{0.8, 0.3};
        const VertexPath arc{1, 0, 1, 1, 0};
        const VertexFn k = [&](const VertexPath& y) { return forward_kernel(spec, y, arc, lambda, 0); };
        for (const auto& x : spec.ball(3)) {
            CHECK(std::abs(apply_Q(spec, k, x) - lambda * k(x)) < 1e-12 * std::max(1.0, std::abs(k(x))));
        }
    }
}

TEST_CASE("forward Poisson transform and its inverse") {
    std::mt19937_64 rng(31);
    for (const auto& spec : forward_specs()) {
        for (Complex lambda : {Complex{1.0, 0.0}, Complex{-0.7, 1.2}}) {
            const auto sigma = random_distribution(spec, 3, rng);
            CHECK(close(forward_poisson(sigma, spec, lambda, VertexPath{}), sigma.total(), 1e-15));
            const VertexFn h = [&](const VertexPath& x) { return forward_poisson(sigma, spec, lambda, x); };
            for (const auto& x : spec.ball(3)) {
                CHECK(std::abs(apply_Q(spec, h, x) - lambda * h(x)) < 1e-12 * std::max(1.0, std::abs(h(x))));
            }
            const auto back = forward_recover(spec, lambda, h, 4);
            CHECK(max_arc_diff(spec, sigma, back) < 1e-12);
            const VertexFn again = [&](const VertexPath& x) { return forward_poisson(back, spec, lambda, x); };
            for (const auto& x : spec.ball(4)) CHECK(std::abs(again(x) - h(x)) < 1e-12 * std::max(1.0, std::abs(h(x))));
        }
    }
}

TEST_CASE("walk boundary measure gives the constant function") {
    for (const auto& spec : forward_specs()) {
        const auto nu = forward_measure(spec, 4);
        for (const auto& x : spec.ball(4)) CHECK(std::abs(forward_poisson(nu, spec, 1.0, x) - 1.0) < 1e-12);
    }
}

TEST_CASE("non-harmonic input is rejected") {
    const auto spec = binary_forward();
    const VertexFn depth = [](const VertexPath& x) { return Complex(x.depth()); };
    CHECK(code_of([&] { forward_recover(spec, 1.0, depth, 3); }) == ErrorCode::NotPolyharmonic);
}

TEST_CASE("polyharmonic synthesis for Q") {
    std::mt19937_64 rng(37);
    for (const auto& spec : forward_specs()) {
        const Complex lambda{1.3, -0.4};
        auto sigma = random_sigmas(spec, 1, rng);
        CHECK(forward_poly_synthesize(sigma, spec, lambda, VertexPath{1, 0}) ==
              forward_poisson(sigma[0], spec, lambda, VertexPath{1, 0}));

        // σ_0 = 0: (λI−Q) f = −∫K_Q dσ_1
        const std::vector<BoundaryDistribution> pair{BoundaryDistribution::uniform(0.0),
                                                     random_distribution(spec, 3, rng)};
        const VertexFn f = [&](const VertexPath& x) { return forward_poly_synthesize(pair, spec, lambda, x); };
        for (const auto& x : spec.ball(3)) {
            const Complex want = -forward_poisson(pair[1], spec, lambda, x);
            CHECK(std::abs(forward_defect(spec, lambda, f, x, 1) - want) < 1e-12 * std::max(1.0, std::abs(want)));
        }

        for (int n = 1; n <= 3; ++n) {
            const auto s = random_sigmas(spec, n, rng);
            const VertexFn g = [&](const VertexPath& x) { return forward_poly_synthesize(s, spec, lambda, x); };
            for (const auto& x : spec.ball(4)) CHECK(std::abs(forward_defect(spec, lambda, g, x, n)) < 1e-10);
        }
    }
}

TEST_CASE("falling factorial coefficients") {
    const auto a = falling_factorial_matrix(4);
    CHECK(a.at(0, 0) == 1.0);
    CHECK(a.at(1, 1) == 1.0);
    CHECK(a.at(1, 2) == -1.0);
    CHECK(a.at(2, 2) == 1.0);
    CHECK(a.at(1, 3) == 2.0);
    CHECK(a.at(2, 3) == -3.0);
    CHECK(a.at(3, 3) == 1.0);
    for (int t = 0; t <= 6; ++t) {
        for (int r = 0; r <= 3; ++r) {
            double sum = 0.0;
            for (int k = 0; k <= r; ++k) sum += a.at(k, r) * std::pow(t, k);
            CHECK(sum == falling_factorial(t, r));
        }
    }
}

TEST_CASE("vertex power basis") {
    std::mt19937_64 rng(41);
    for (const auto& spec : forward_specs()) {
        for (Complex lambda : {Complex{1.0, 0.0}, Complex{0.6, 0.9}}) {
            const auto sigma = random_sigmas(spec, 3, rng);
            const auto basis = to_vertex_power_basis(spec, sigma, lambda);
            CHECK(max_arc_diff(spec, basis[0], sigma[0]) < 1e-15);
            const auto back = from_vertex_power_basis(spec, basis, lambda);
            for (size_t r = 0; r < sigma.size(); ++r) CHECK(max_arc_diff(spec, back[r], sigma[r]) < 1e-12);
            for (const auto& x : spec.ball(4)) {
                const Complex want = forward_poly_synthesize(sigma, spec, lambda, x);
                CHECK(std::abs(vertex_power_evaluate(basis, spec, lambda, x) - want) <
                      1e-12 * std::max(1.0, std::abs(want)));
            }
        }
    }
}

TEST_CASE("forward decomposition inverts synthesis") {
    std::mt19937_64 rng(43);
    for (const auto& spec : forward_specs()) {
        const Complex lambda{1.1, 0.2};
        for (int n = 1; n <= 3; ++n) {
            const auto sigma = random_sigmas(spec, n, rng);
            const VertexFn f = [&](const VertexPath& x) { return forward_poly_synthesize(sigma, spec, lambda, x); };
            const auto back = forward_decompose(spec, lambda, f, n + 3, n, 3);
            REQUIRE(back.size() == sigma.size());
            for (size_t r = 0; r < sigma.size(); ++r) CHECK(max_arc_diff(spec, back[r], sigma[r]) < 1e-10);
        }
    }
}

TEST_CASE("forward decomposition errors") {
    std::mt19937_64 rng(47);
    const auto spec = binary_forward();
    const auto sigma = random_sigmas(spec, 3, rng);
    const VertexFn f = [&](const VertexPath& x) { return forward_poly_synthesize(sigma, spec, 1.2, x); };
    CHECK(code_of([&] { forward_decompose(spec, 1.2, f, 6, 2, 3); }) == ErrorCode::NotPolyharmonic);
    CHECK(code_of([&] { forward_decompose(spec, 1.2, f, 4, 3, 3); }) == ErrorCode::InsufficientRadius);
    CHECK(code_of([&] { forward_decompose(spec, 0.0, f, 6, 3, 3); }) == ErrorCode::ZeroLambda);
}

}
