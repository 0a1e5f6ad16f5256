#include "martinkern/polyharmonic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "martinkern/errors.hpp"

namespace martinkern {

Complex synthesize(const PolyRepresentation& rep, const JetTable& table, const VertexPath& x) {
    if (table.order() < rep.order() - 1) {
        throw Error(ErrorCode::InvalidSpec,
                    "jet order " + std::to_string(table.order()) + " too small for order " +
                        std::to_string(rep.order()));
    }
    Complex f{};
    for (int r = 0; r < rep.order(); ++r) {
        f += poisson_transform(rep.distributions[static_cast<size_t>(r)], table, x).derivative(r);
    }
    return f;
}

DefectEvaluator::DefectEvaluator(const TreeSpec& spec, Complex lambda, VertexFn f)
    : spec_(spec), lambda_(lambda), f_(std::move(f)) {}

Complex DefectEvaluator::operator()(const VertexPath& x, int n) {
    auto key = std::make_pair(n, x);
    if (auto it = cache_.find(key); it != cache_.end()) {
        return it->second;
    }
    Complex v;
    if (n == 0) {
        v = f_(x);
    } else {
        v = lambda_ * (*this)(x, n - 1);
        for (const auto& [y, p] : spec_.neighbours(x)) {
            v -= p * (*this)(y, n - 1);
        }
    }
    cache_.emplace(std::move(key), v);
    return v;
}

Complex apply_defect(const TreeSpec& spec, Complex lambda, const VertexFn& f, const VertexPath& x,
                     int n) {
    DefectEvaluator d(spec, lambda, f);
    return d(x, n);
}

PolyRepresentation decompose(const JetTable& table, const VertexFn& f, int radius, int n,
                             int carrier_depth) {
    const auto& spec = table.spec();
    if (n < 1) {
        throw Error(ErrorCode::InvalidSpec, "polyharmonic order must be at least 1");
    }
    if (table.order() < n - 1) {
        throw Error(ErrorCode::InvalidSpec, "jet order too small for the requested order");
    }
    if (radius < n + carrier_depth) {
        throw Error(ErrorCode::InsufficientRadius,
                    "need radius >= order + carrier depth = " + std::to_string(n + carrier_depth));
    }

    DefectEvaluator defect(spec, table.lambda(), f);
    double scale = 1.0;
    for (const auto& x : spec.ball(radius)) {
        scale = std::max(scale, std::abs(defect(x, 0)));
    }
    for (const auto& x : spec.ball(radius - n)) {
        const double d = std::abs(defect(x, n));
        if (d > kDefectTol * scale) {
            throw Error(ErrorCode::NotPolyharmonic,
                        "order-" + std::to_string(n) + " defect " + std::to_string(d) + " at " +
                            x.to_string());
        }
    }

    PolyRepresentation rep;
    rep.lambda = table.lambda();
    rep.distributions.resize(static_cast<size_t>(n));
    const auto carrier = spec.ball(carrier_depth);
    for (int m = n; m >= 1; --m) {
        // (λI−P)^{m−1} f = (−1)^{m−1} Σ_{r≥m−1} r!/(r−m+1)! ∫ K^(r−m+1) dν_r
        const double sign = (m - 1) % 2 == 0 ? 1.0 : -1.0;
        std::map<VertexPath, Complex> h;
        for (const auto& x : carrier) {
            Complex v = sign * defect(x, m - 1);
            for (int r = m; r < n; ++r) {
                const int j = r - m + 1;
                const Jet pr = poisson_transform(rep.distributions[static_cast<size_t>(r)], table, x);
                v -= factorial(r) / factorial(j) * pr.derivative(j);
            }
            h[x] = v / factorial(m - 1);
        }
        const auto harmonic =
            HarmonicEvaluator::from_table(spec, table.lambda(), std::move(h), kDefectTol);
        rep.distributions[static_cast<size_t>(m) - 1] =
            recover_distribution(harmonic, table, carrier_depth, kDefectTol);
    }
    return rep;
}

} // namespace martinkern
