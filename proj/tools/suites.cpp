#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "martinkern/errors.hpp"
#include "martinkern/forward.hpp"
#include "martinkern/green_kernel.hpp"
#include "martinkern/isotropic.hpp"
#include "martinkern/polyharmonic.hpp"
#include "martinkern/series_oracle.hpp"

namespace martinkern::cli {

Check residual_check(std::string name, double value, double tolerance) {
    return {std::move(name), value, tolerance, value <= tolerance};
}

Check above_check(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, value > threshold};
}

namespace {

double max_abs_diff(const BoundaryDistribution& a, const BoundaryDistribution& b, const TreeSpec& spec) {
    double worst = 0.0;
    for (const auto& [x, v] : a.values()) {
        worst = std::max(worst, std::abs(v - arc_value(spec, b, x)));
    }
    for (const auto& [x, v] : b.values()) {
        worst = std::max(worst, std::abs(v - arc_value(spec, a, x)));
    }
    return worst;
}

PolyRepresentation random_rep(const TreeSpec& spec, Complex lambda, int n, int depth,
                              std::mt19937_64& rng) {
    PolyRepresentation rep;
    rep.lambda = lambda;
    for (int r = 0; r < n; ++r) {
        rep.distributions.push_back(random_distribution(spec, depth, rng));
    }
    return rep;
}

// λ-harmonic table for Q built top-down on the ball of depth `radius`
std::map<VertexPath, Complex> random_forward_harmonic(const TreeSpec& spec, Complex lambda, int radius,
                                                      std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::map<VertexPath, Complex> h;
    h[VertexPath{}] = {g(rng), g(rng)};
    for (const auto& x : spec.ball(radius - 1)) {
        const auto& slots = spec.type(spec.type_at(x)).slots;
        Complex rest = lambda * h.at(x);
        for (size_t s = 0; s + 1 < slots.size(); ++s) {
            const Complex v{g(rng), g(rng)};
            h[x.child(static_cast<int>(s))] = v;
            rest -= slots[s].down_prob * v;
        }
        h[x.child(static_cast<int>(slots.size()) - 1)] = rest / slots.back().down_prob;
    }
    return h;
}

} // namespace

std::vector<Check> eigen_suite(const TreeSpec& spec, Complex lambda, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const JetTable table = solve_F_up(spec, lambda, 0);
    std::vector<Check> out;
    for (int trial = 0; trial < 5; ++trial) {
        const VertexPath arc = random_vertex(spec, 1 + trial % 3, rng);
        const VertexFn K = [&](const VertexPath& y) { return martin_kernel(table, y, arc).value(); };
        double worst = 0.0;
        for (const auto& x : spec.ball(3)) {
            if (arc.is_prefix_of(x)) continue;
            worst = std::max(worst, std::abs(apply_P(spec, K, x) - lambda * K(x)));
        }
        out.push_back(residual_check("PK = lambda K off arc " + arc.to_string(), worst, 1e-10));
    }
    return out;
}

std::vector<Check> oracle_suite(const TreeSpec& spec, Complex lambda, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const RhoBracket rho = estimate_rho(spec);
    std::vector<Check> out;
    out.push_back(above_check("|lambda| above rho upper bound", std::abs(lambda), rho.hi));
    if (!out.back().pass) return out;

    const JetTable table = solve_F_up(spec, lambda, 0);
    constexpr int N = 40;
    std::vector<VertexPath> targets{VertexPath{}};
    for (int d = 1; d <= 3; ++d) targets.push_back(random_vertex(spec, d, rng));
    const TruncatedBall ball(spec, VertexPath{}, N, targets);
    for (const auto& y : targets) {
        const auto g = green_series(ball, y, lambda, N, rho.hi);
        const double dg = std::abs(g.value - green(table, VertexPath{}, y).value());
        out.push_back(residual_check("G(o," + y.to_string() + ") series vs solver", dg, g.tail_bound + 1e-8));
        if (y.is_root()) continue;
        const auto f = first_passage_series(ball, y, lambda, N, rho.hi);
        const double df = std::abs(f.value - first_passage(table, VertexPath{}, y).value());
        out.push_back(residual_check("F(o," + y.to_string() + ") series vs solver", df, f.tail_bound + 1e-8));
    }
    return out;
}

std::vector<Check> roundtrip_suite(const TreeSpec& spec, Complex lambda,
                                   const std::optional<BoundaryDistribution>& given, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const JetTable table = solve_F_up(spec, lambda, 0);
    const int depth = std::max(3, given ? given->carrier_depth() : 0);
    const BoundaryDistribution nu = given ? refine(spec, *given, depth) : random_distribution(spec, depth, rng);

    std::vector<Check> out;
    const auto h = HarmonicEvaluator::from_distribution(nu, table);
    const auto back = recover_distribution(h, table, depth, 1e-8);
    out.push_back(residual_check("recover(poisson(nu)) = nu", max_abs_diff(nu, back, spec), 1e-10));
    out.push_back(residual_check("recovered masses additive", additivity_defect(spec, back.values()), 1e-10));

    const auto values = random_harmonic_table(spec, lambda, 4, rng);
    const auto tab = HarmonicEvaluator::from_table(spec, lambda, values);
    const auto nu_h = recover_distribution(tab, table, 3, 1e-8);
    double worst = 0.0;
    for (const auto& x : spec.ball(3)) {
        worst = std::max(worst, std::abs(poisson_transform(nu_h, table, x).value() - values.at(x)));
    }
    out.push_back(residual_check("poisson(recover(h)) = h", worst, 1e-9));
    out.push_back(residual_check("masses of tabulated h additive", additivity_defect(spec, nu_h.values()), 1e-10));
    return out;
}

std::vector<Check> poly_suite(const TreeSpec& spec, Complex lambda, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const JetTable table = solve_F_up(spec, lambda, 3);
    std::vector<Check> out;

    for (int r = 1; r <= 3; ++r) {
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            std::uniform_int_distribution<int> depth(0, 3);
            const VertexPath x = random_vertex(spec, depth(rng), rng);
            const VertexPath arc = random_vertex(spec, 4, rng);
            const VertexFn Kr = [&](const VertexPath& y) { return martin_kernel(table, y, arc).derivative(r); };
            const Complex lhs = apply_defect(spec, lambda, Kr, x, 1);
            const Complex rhs = -static_cast<double>(r) * martin_kernel(table, x, arc).derivative(r - 1);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        out.push_back(residual_check("(lambda I - P) K^(" + std::to_string(r) + ") = -" + std::to_string(r) +
                                         " K^(" + std::to_string(r - 1) + ")",
                                     worst, 1e-8));
    }

    for (int n = 1; n <= 3; ++n) {
        const auto rep = random_rep(spec, lambda, n, 2, rng);
        const VertexFn f = [&](const VertexPath& y) { return synthesize(rep, table, y); };
        DefectEvaluator defect(spec, lambda, f);
        double worst = 0.0;
        for (const auto& x : spec.ball(5 - n)) {
            worst = std::max(worst, std::abs(defect(x, n)));
        }
        out.push_back(residual_check("(lambda I - P)^" + std::to_string(n) + " f = 0", worst, 1e-8));
    }

    const auto rep = random_rep(spec, lambda, 2, 2, rng);
    const VertexFn f = [&](const VertexPath& y) { return synthesize(rep, table, y); };
    const auto back = decompose(table, f, 4, 2, 2);
    double worst = 0.0;
    for (int r = 0; r < 2; ++r) {
        worst = std::max(worst, max_abs_diff(rep.distributions[static_cast<size_t>(r)],
                                             back.distributions[static_cast<size_t>(r)], spec));
    }
    out.push_back(residual_check("decompose(synthesize(nu)) = nu", worst, 1e-8));
    return out;
}

std::vector<Check> isotropic_suite(int q, Complex lambda, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto params = make_isotropic(q, lambda);
    const TreeSpec spec = homogeneous_tree_spec(q);
    std::vector<Check> out;

    const Jet F = closed_F(params, 3);
    const double p = 1.0 / (q + 1.0);
    out.push_back(residual_check("lambda F - p - q p F^2",
                                 std::abs(lambda * F.value() - p - q * p * F.value() * F.value()), 1e-10));
    const auto coeffs = horocycle_coeffs(params, 4);
    double diag = 0.0;
    for (int r = 1; r <= 3; ++r) {
        diag = std::max(diag, std::abs(coeffs.at(r, r) - std::pow(coeffs.f, r)));
    }
    out.push_back(residual_check("f_{r,r} = f^r", diag, 1e-12));

    if (std::abs(lambda) <= params.rho()) {
        return out;
    }
    const JetTable table = solve_F_up(spec, lambda, 3);
    const int a_type = spec.type(spec.root_type()).slots[0].child_type;
    out.push_back(residual_check("closed F matches solver jets", F.distance(table.f_up(a_type)), 1e-10));

    double kernel = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const VertexPath x = random_vertex(spec, trial % 4, rng);
        const VertexPath arc = random_vertex(spec, 4, rng);
        const Jet K = martin_kernel(table, x, arc);
        for (int r = 0; r <= 3; ++r) {
            kernel = std::max(kernel, std::abs(isotropic_kernel(params, coeffs, x, arc, r) - K.derivative(r)));
        }
    }
    out.push_back(residual_check("horocycle kernels match jet kernels", kernel, 1e-8));

    const auto rep = random_rep(spec, lambda, 3, 3, rng);
    const auto basis = to_horocycle_basis(spec, rep, coeffs);
    const auto back = from_horocycle_basis(spec, lambda, basis, coeffs);
    double round = 0.0;
    for (int r = 0; r < 3; ++r) {
        round = std::max(round, max_abs_diff(rep.distributions[static_cast<size_t>(r)],
                                             back.distributions[static_cast<size_t>(r)], spec));
    }
    out.push_back(residual_check("horocycle basis round trip", round, 1e-10));
    double eval = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const VertexPath x = random_vertex(spec, trial % 4, rng);
        eval = std::max(eval, std::abs(horocycle_evaluate(spec, params, basis, x) - synthesize(rep, table, x)));
    }
    out.push_back(residual_check("horocycle evaluation matches synthesis", eval, 1e-8));
    return out;
}

std::vector<Check> forward_suite(const TreeSpec& spec, Complex lambda, std::uint64_t seed) {
    require_forward(spec);
    std::mt19937_64 rng(seed);
    std::vector<Check> out;

    const auto sigma = random_distribution(spec, 3, rng);
    const VertexFn h = [&](const VertexPath& x) { return forward_poisson(sigma, spec, lambda, x); };
    out.push_back(residual_check("recover(transform(sigma)) = sigma",
                                 max_abs_diff(sigma, forward_recover(spec, lambda, h, 3), spec), 1e-12));
    const auto table = random_forward_harmonic(spec, lambda, 3, rng);
    const VertexFn ht = [&](const VertexPath& x) { return table.at(x); };
    const auto sigma_t = forward_recover(spec, lambda, ht, 3);
    double worst = 0.0;
    for (const auto& [x, v] : table) {
        worst = std::max(worst, std::abs(forward_poisson(sigma_t, spec, lambda, x) - v));
    }
    out.push_back(residual_check("transform(recover(h)) = h", worst, 1e-12));

    for (int n = 2; n <= 3; ++n) {
        std::vector<BoundaryDistribution> s;
        for (int r = 0; r < n; ++r) s.push_back(random_distribution(spec, 3, rng));
        const VertexFn f = [&](const VertexPath& x) { return forward_poly_synthesize(s, spec, lambda, x); };
        double defect = 0.0;
        for (const auto& x : spec.ball(4)) {
            defect = std::max(defect, std::abs(forward_defect(spec, lambda, f, x, n)));
        }
        out.push_back(residual_check("(lambda I - Q)^" + std::to_string(n) + " f = 0", defect, 1e-10));

        const auto basis = to_vertex_power_basis(spec, s, lambda);
        const auto back = from_vertex_power_basis(spec, basis, lambda);
        double round = 0.0;
        for (int r = 0; r < n; ++r) {
            round = std::max(round, max_abs_diff(s[static_cast<size_t>(r)], back[static_cast<size_t>(r)], spec));
        }
        out.push_back(residual_check("vertex power basis round trip, n = " + std::to_string(n), round, 1e-12));
        double eval = 0.0;
        for (const auto& x : spec.ball(3)) {
            eval = std::max(eval, std::abs(vertex_power_evaluate(basis, spec, lambda, x) - f(x)));
        }
        out.push_back(residual_check("sum |x|^k h_k = f, n = " + std::to_string(n), eval, 1e-10));
    }

    const auto measure = forward_measure(spec, 4);
    out.push_back(residual_check("boundary measure additive", additivity_defect(spec, measure.values()), 1e-15));
    double ones = 0.0;
    for (const auto& x : spec.ball(4)) {
        ones = std::max(ones, std::abs(forward_poisson(measure, spec, 1.0, x) - 1.0));
    }
    out.push_back(residual_check("measure transforms to 1 at lambda = 1", ones, 1e-12));
    return out;
}

std::vector<Check> group_suite(const EdgeTypeModel& model, Complex lambda) {
    const auto report = group_invariant_checks(model, lambda);
    std::vector<Check> out;
    out.push_back(residual_check("p_j G_{-j} = p_{-j} G_j", report.max_reversibility, 1e-10));
    out.push_back(residual_check("p_{-j} G_j^2 + G_j = p_j G^2", report.max_quadratic, 1e-10));
    out.push_back(above_check("|G| nonvanishing", std::abs(report.G), 1e-12));
    return out;
}

} // namespace martinkern::cli
