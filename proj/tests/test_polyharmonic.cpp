#include <doctest.h>

#include <cmath>
#include <random>

#include "martinkern/errors.hpp"
#include "martinkern/polyharmonic.hpp"
#include "support.hpp"

using namespace martinkern;
using namespace testing;

namespace {

PolyRepresentation random_rep(const TreeSpec& spec, Complex lambda, int n, std::mt19937_64& rng) {
    PolyRepresentation rep;
    rep.lambda = lambda;
    for (int r = 0; r < n; ++r) rep.distributions.push_back(random_distribution(spec, 2, rng));
    return rep;
}

VertexFn synthesized(const PolyRepresentation& rep, const JetTable& table) {
    return [&rep, &table](const VertexPath& x) { return synthesize(rep, table, x); };
}

VertexFn kernel_derivative(const JetTable& table, const VertexPath& arc, int r) {
    return [&table, arc, r](const VertexPath& x) { return martin_kernel(table, x, arc).derivative(r); };
}

} // namespace

TEST_SUITE("polyharmonic") {

TEST_CASE("order one synthesis is the Poisson transform") {
    std::mt19937_64 rng(1);
    const auto spec = mixed_tree();
    const auto table = solve_F_up(spec, Complex{1.3, 0.2}, 0);
    const auto rep = random_rep(spec, table.lambda(), 1, rng);
    for (const auto& x : spec.ball(3)) {
        CHECK(synthesize(rep, table, x) == poisson_transform(rep.distributions[0], table, x).value());
    }
}

TEST_CASE("resolvent applied to a derivative kernel") {
    // (λI−P)K^(r) = −r K^(r−1)
    std::mt19937_64 rng(2);
    for (const auto& spec : walk_specs()) {
        const auto table = solve_F_up(spec, Complex{1.2, -0.3}, 3);
        for (int trial = 0; trial < 5; ++trial) {
            const auto arc = random_vertex(spec, 4, rng);
            const auto x = random_vertex(spec, 1 + trial % 3, rng);
            for (int r = 1; r <= 3; ++r) {
                const Complex lhs = apply_defect(spec, table.lambda(), kernel_derivative(table, arc, r), x, 1);
                const Complex rhs = -static_cast<double>(r) * martin_kernel(table, x, arc).derivative(r - 1);
                CHECK(std::abs(lhs - rhs) < 1e-8);
            }
        }
    }
}

TEST_CASE("order two with vanishing harmonic part") {
    std::mt19937_64 rng(3);
    const auto spec = biased_tree();
    const auto table = solve_F_up(spec, 1.3, 1);
    PolyRepresentation rep{1.3, {BoundaryDistribution::uniform(0.0), random_distribution(spec, 2, rng)}};
    const auto f = synthesized(rep, table);
    for (const auto& x : spec.ball(2)) {
        const Complex h = poisson_transform(rep.distributions[1], table, x).value();
        CHECK(std::abs(apply_defect(spec, 1.3, f, x, 1) + h) < 1e-8);
    }
}

TEST_CASE("harmonic functions have no defect") {
    std::mt19937_64 rng(4);
    const auto spec = two_type_tree();
    const auto table = solve_F_up(spec, Complex{0.7, 0.9}, 0);
    const auto nu = random_distribution(spec, 3, rng);
    const VertexFn h = [&](const VertexPath& x) { return poisson_transform(nu, table, x).value(); };
    for (const auto& x : spec.ball(3)) CHECK(std::abs(apply_defect(spec, table.lambda(), h, x, 1)) < 1e-10);
}

TEST_CASE("synthesized functions are annihilated") {
    std::mt19937_64 rng(5);
    for (const auto& spec : walk_specs()) {
        const Complex lambda{1.15, 0.45};
        const auto table = solve_F_up(spec, lambda, 3);
        for (int n = 1; n <= 3; ++n) {
            const auto rep = random_rep(spec, lambda, n, rng);
            DefectEvaluator defect(spec, lambda, synthesized(rep, table));
            for (const auto& x : spec.ball(5 - n)) CHECK(std::abs(defect(x, n)) < 1e-8);
            // one application short leaves something behind
            double left = 0.0;
            for (const auto& x : spec.ball(5 - n)) left = std::max(left, std::abs(defect(x, n - 1)));
            CHECK(left > 1e-6);
        }
    }
}

TEST_CASE("order three after two applications is harmonic") {
    std::mt19937_64 rng(6);
    const auto spec = t2();
    const auto table = solve_F_up(spec, 1.4, 2);
    const auto rep = random_rep(spec, 1.4, 3, rng);
    DefectEvaluator defect(spec, 1.4, synthesized(rep, table));
    for (const auto& x : spec.ball(2)) {
        // (λI−P)^2 f = 2 ∫K dν_2
        CHECK(std::abs(defect(x, 2) - 2.0 * poisson_transform(rep.distributions[2], table, x).value()) < 1e-8);
        CHECK(std::abs(defect(x, 3)) < 1e-8);
    }
}

TEST_CASE("decompose inverts synthesize") {
    std::mt19937_64 rng(7);
    for (const auto& spec : walk_specs()) {
        const Complex lambda{1.25, -0.35};
        const auto table = solve_F_up(spec, lambda, 2);
        for (int n = 1; n <= 3; ++n) {
            const auto rep = random_rep(spec, lambda, n, rng);
            const auto f = synthesized(rep, table);
            const auto back = decompose(table, f, n + 3, n, 3);
            REQUIRE(back.order() == n);
            for (int r = 0; r < n; ++r) {
                CHECK(max_arc_diff(spec, rep.distributions[static_cast<size_t>(r)],
                                   back.distributions[static_cast<size_t>(r)]) < 1e-8);
            }
            for (const auto& x : spec.ball(3)) CHECK(std::abs(synthesize(back, table, x) - f(x)) < 1e-8);
        }
    }
}

TEST_CASE("second derivative kernel decomposes into a point mass") {
    const auto spec = t2();
    const auto table = solve_F_up(spec, 1.5, 2);
    const VertexPath arc{2, 0, 1, 1, 0, 1, 0};
    const auto rep = decompose(table, kernel_derivative(table, arc, 2), 6, 3, 3);
    for (const auto& [x, v] : rep.distributions[2].values()) {
        CHECK(close(v, x.is_prefix_of(arc) ? 1.0 : 0.0, 1e-8));
    }
    for (int r = 0; r < 2; ++r) {
        for (const auto& [x, v] : rep.distributions[static_cast<size_t>(r)].values()) CHECK(std::abs(v) < 1e-8);
    }
}

TEST_CASE("decompose rejects bad input") {
    std::mt19937_64 rng(8);
    const auto spec = t2();
    const auto table = solve_F_up(spec, 1.5, 2);
    const auto rep = random_rep(spec, 1.5, 3, rng);
    const auto f = synthesized(rep, table);
    try {
        decompose(table, f, 6, 2, 3);
        FAIL("order-3 input accepted as order 2");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotPolyharmonic);
    }
    try {
        decompose(table, f, 5, 3, 3);
        FAIL("small radius accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientRadius);
    }
    CHECK_THROWS_AS(synthesize(rep, solve_F_up(spec, 1.5, 1), VertexPath{}), Error);
}

}
