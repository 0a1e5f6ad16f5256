#include "martinkern/green_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "martinkern/errors.hpp"
#include "martinkern/series_oracle.hpp"

namespace martinkern {

namespace {

constexpr double kBlowUp = 1e12;
constexpr double kPoleTol = 1e-14;

Jet fixed_point_map(const TreeSpec& spec, const std::vector<Jet>& f, int t, const Jet& lam) {
    const auto& rec = spec.type(t);
    Jet denom = lam;
    for (const auto& s : rec.slots) {
        denom -= s.down_prob * f[static_cast<size_t>(s.child_type)];
    }
    return Complex{rec.up_prob} / denom;
}

bool real_positive(Complex lambda) {
    return lambda.imag() == 0.0 && lambda.real() > 0.0;
}

} // namespace

JetTable solve_F_up(const TreeSpec& spec, Complex lambda, int order, const SolverOptions& options) {
    require_valid(spec);
    if (options.rho_bound && std::abs(lambda) <= *options.rho_bound) {
        throw Error(ErrorCode::NonConvergence,
                    "|lambda| does not exceed the supplied spectral radius bound");
    }
    const int n = spec.type_count();
    const int root = spec.root_type();
    const Jet lam = Jet::variable(order, lambda);

    std::vector<Jet> f(static_cast<size_t>(n), Jet(order));
    std::vector<Jet> next(static_cast<size_t>(n), Jet(order));
    int iter = 0;
    bool converged = false;
    while (iter < options.max_iter) {
        ++iter;
        double change = 0.0;
        for (int t = 0; t < n; ++t) {
            if (t == root) continue;
            const auto& rec = spec.type(t);
            Jet denom = lam;
            for (const auto& s : rec.slots) {
                denom -= s.down_prob * f[static_cast<size_t>(s.child_type)];
            }
            if (real_positive(lambda) && denom.value().real() <= 0.0) {
                throw Error(ErrorCode::NonConvergence,
                            "iteration left the positive cone (lambda below the spectral radius)");
            }
            next[static_cast<size_t>(t)] = Complex{rec.up_prob} / denom;
            const double v = next[static_cast<size_t>(t)].sup_norm();
            if (!std::isfinite(v) || v > kBlowUp) {
                throw Error(ErrorCode::NonConvergence, "fixed-point iterates blew up");
            }
            change = std::max(change, next[static_cast<size_t>(t)].distance(f[static_cast<size_t>(t)]));
        }
        std::swap(f, next);
        if (change < options.tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw Error(ErrorCode::NonConvergence,
                    "no convergence after " + std::to_string(options.max_iter) + " iterations");
    }

    double residual = 0.0;
    for (int t = 0; t < n; ++t) {
        if (t == root) continue;
        residual = std::max(residual, fixed_point_map(spec, f, t, lam).distance(f[static_cast<size_t>(t)]));
        double children = 0.0;
        for (const auto& s : spec.type(t).slots) {
            children += s.down_prob * std::abs(f[static_cast<size_t>(s.child_type)].value());
        }
        if (children >= std::abs(lambda)) {
            throw Error(ErrorCode::NonConvergence,
                        "fixed point violates sum_s p|F| < |lambda|; lambda is inside the spectral disk");
        }
    }

    JetTable table;
    table.spec_ = spec;
    table.lambda_ = lambda;
    table.order_ = order;
    table.f_up_ = std::move(f);
    table.iterations_ = iter;
    table.residual_ = residual;
    return table;
}

std::vector<Jet> F_down_path(const JetTable& table, const VertexPath& x) {
    const auto& spec = table.spec();
    const auto types = spec.types_along(x);
    const Jet lam = Jet::variable(table.order(), table.lambda());
    std::vector<Jet> out;
    out.reserve(static_cast<size_t>(x.depth()));
    for (int i = 1; i <= x.depth(); ++i) {
        const auto& rec = spec.type(types[static_cast<size_t>(i) - 1]);
        const int slot = x[i - 1];
        Jet denom = lam;
        if (i >= 2) {
            denom -= rec.up_prob * out.back();
        }
        for (int s = 0; s < static_cast<int>(rec.slots.size()); ++s) {
            if (s == slot) continue;
            const auto& sr = rec.slots[static_cast<size_t>(s)];
            denom -= sr.down_prob * table.f_up(sr.child_type);
        }
        out.push_back(Complex{rec.slots[static_cast<size_t>(slot)].down_prob} / denom);
    }
    return out;
}

Jet first_passage(const JetTable& table, const VertexPath& x, const VertexPath& y) {
    const auto& spec = table.spec();
    const int c = confluent(x, y).depth();
    Jet acc(table.order(), 1.0);
    const auto xt = spec.types_along(x);
    for (int i = x.depth(); i > c; --i) {
        acc *= table.f_up(xt[static_cast<size_t>(i)]);
    }
    if (y.depth() > c) {
        const auto down = F_down_path(table, y);
        for (int i = c; i < y.depth(); ++i) {
            acc *= down[static_cast<size_t>(i)];
        }
    }
    return acc;
}

Jet return_function(const JetTable& table, const VertexPath& x) {
    const auto& spec = table.spec();
    const auto& rec = spec.type(spec.type_at(x));
    Jet u(table.order());
    if (!x.is_root()) {
        u += rec.up_prob * F_down_path(table, x).back();
    }
    for (const auto& s : rec.slots) {
        u += s.down_prob * table.f_up(s.child_type);
    }
    return u;
}

Jet green_diag(const JetTable& table, const VertexPath& x) {
    const Jet denom = Jet::variable(table.order(), table.lambda()) - return_function(table, x);
    if (std::abs(denom.value()) < kPoleTol) {
        throw Error(ErrorCode::ZeroDenominator, "lambda - U(x,x) vanishes at " + x.to_string());
    }
    return Complex{1.0} / denom;
}

Jet green(const JetTable& table, const VertexPath& x, const VertexPath& y) {
    return first_passage(table, x, y) * green_diag(table, y);
}

Jet kernel_at(const JetTable& table, const VertexPath& x, const VertexPath& w) {
    const auto& spec = table.spec();
    const VertexPath c = confluent(x, w);
    const auto xt = spec.types_along(x);
    Jet num(table.order(), 1.0);
    for (int i = x.depth(); i > c.depth(); --i) {
        num *= table.f_up(xt[static_cast<size_t>(i)]);
    }
    Jet den(table.order(), 1.0);
    for (const auto& j : F_down_path(table, c)) {
        den *= j;
    }
    return num / den;
}

Jet martin_kernel(const JetTable& table, const VertexPath& x, const VertexPath& arc) {
    if (arc.is_strict_ancestor_of(x)) {
        throw Error(ErrorCode::ArcTooCoarse,
                    "arc " + arc.to_string() + " is a strict ancestor of " + x.to_string());
    }
    return kernel_at(table, x, arc);
}

Probe probe_convergence(const TreeSpec& spec, double lambda, int max_iter) {
    const int n = spec.type_count();
    const int root = spec.root_type();
    std::vector<double> f(static_cast<size_t>(n), 0.0), next(static_cast<size_t>(n), 0.0);
    for (int iter = 0; iter < max_iter; ++iter) {
        double change = 0.0;
        for (int t = 0; t < n; ++t) {
            if (t == root) continue;
            const auto& rec = spec.type(t);
            double denom = lambda;
            for (const auto& s : rec.slots) {
                denom -= s.down_prob * f[static_cast<size_t>(s.child_type)];
            }
            if (denom <= 0.0) {
                return Probe::Diverged;
            }
            next[static_cast<size_t>(t)] = rec.up_prob / denom;
            change = std::max(change, std::abs(next[static_cast<size_t>(t)] - f[static_cast<size_t>(t)]));
        }
        std::swap(f, next);
        if (change < 1e-13) {
            return Probe::Converged;
        }
    }
    return Probe::Undetermined;
}

RhoBracket estimate_rho(const TreeSpec& spec, const RhoOptions& options) {
    require_valid(spec);
    RhoBracket b;

    // Supermultiplicativity of p^(2n)(o,o) makes every term a lower bound.
    // The bisection below does the real work, so the ball is kept small.
    int radius = options.series_radius;
    const std::size_t budget = std::min<std::size_t>(default_max_ball(), 1u << 18);
    for (;;) {
        try {
            TruncatedBall ball(spec, VertexPath{}, radius, {}, budget);
            const auto seq = transition_sequence(ball, VertexPath{}, radius);
            for (int n = 2; n <= radius; n += 2) {
                const double p = seq[static_cast<size_t>(n)];
                if (p > 0.0) {
                    b.series_lo = std::max(b.series_lo, std::pow(p, 1.0 / n));
                }
            }
            b.series_steps = radius;
            break;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::BallTooLarge || radius <= 2) throw;
            radius = std::max(2, (radius * 3 / 4) & ~1);
        }
    }

    b.lo = b.series_lo;
    b.hi = 1.0;
    while (b.hi - b.lo > options.target_width) {
        const double mid = 0.5 * (b.lo + b.hi);
        switch (probe_convergence(spec, mid, options.max_iter)) {
        case Probe::Converged:
            b.hi = mid;
            break;
        case Probe::Diverged:
            b.lo = mid;
            b.divergence_lo = mid;
            break;
        case Probe::Undetermined:
            b.budget_exhausted = true;
            return b;
        }
    }
    return b;
}

GroupReport group_invariant_checks(const EdgeTypeModel& model, Complex lambda,
                                   const SolverOptions& options) {
    if (lambda == Complex{}) {
        throw Error(ErrorCode::ZeroLambda, "group checks need lambda != 0");
    }
    const TreeSpec spec = edge_model_to_spec(model);
    const JetTable table = solve_F_up(spec, lambda, 0, options);
    const auto& types = model.types;
    const int n = static_cast<int>(types.size());

    // one root child entered along each edge type
    std::vector<VertexPath> via(static_cast<size_t>(n));
    const auto& root_slots = spec.type(spec.root_type()).slots;
    for (int s = static_cast<int>(root_slots.size()) - 1; s >= 0; --s) {
        via[static_cast<size_t>(root_slots[static_cast<size_t>(s)].child_type - 1)] = VertexPath{s};
    }

    GroupReport report;
    report.lambda = lambda;
    report.G = green_diag(table, VertexPath{}).value();
    std::vector<Complex> gj(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        gj[static_cast<size_t>(j)] = green(table, VertexPath{}, via[static_cast<size_t>(j)]).value();
    }
    const bool real_lambda = lambda.imag() == 0.0;
    for (int j = 0; j < n; ++j) {
        const auto& e = types[static_cast<size_t>(j)];
        const int inv = e.inverse;
        const double pj = e.prob;
        const double pinv = types[static_cast<size_t>(inv)].prob;
        const Complex Gj = gj[static_cast<size_t>(j)];
        EdgeTypeResidual r;
        r.name = e.name;
        r.G_j = Gj;
        r.reversibility = std::abs(pj * gj[static_cast<size_t>(inv)] - pinv * Gj);
        r.quadratic = std::abs(pinv * Gj * Gj + Gj - pj * report.G * report.G);
        if (real_lambda) {
            const Complex root =
                (std::sqrt(1.0 + 4.0 * pj * pinv * report.G * report.G) - 1.0) / (2.0 * pinv);
            r.explicit_root = std::abs(root - Gj);
        } else {
            r.explicit_root = std::numeric_limits<double>::quiet_NaN();
        }
        report.max_reversibility = std::max(report.max_reversibility, r.reversibility);
        report.max_quadratic = std::max(report.max_quadratic, r.quadratic);
        report.edges.push_back(std::move(r));
    }
    report.green_nonvanishing = std::abs(report.G) > 1e-12;
    return report;
}

} // namespace martinkern
