#include "martinkern/forward.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "martinkern/errors.hpp"
#include "martinkern/polyharmonic.hpp"

namespace martinkern {

namespace {

constexpr double kRowTol = 1e-12;

void require_nonzero(Complex lambda) {
    if (lambda == Complex{}) {
        throw Error(ErrorCode::ZeroLambda, "forward operators need lambda != 0");
    }
}

// ∫ K_Q^(r)(x,ξ) dσ(ξ)
Complex forward_term(const BoundaryDistribution& sigma, const TreeSpec& spec, Complex lambda,
                     const VertexPath& x, int r) {
    const int d = x.depth();
    if (r > d) return 0.0;
    return falling_factorial(d, r) * std::pow(lambda, d - r) / forward_mass(spec, x) *
           arc_value(spec, sigma, x);
}

class ForwardDefect {
public:
    ForwardDefect(const TreeSpec& spec, Complex lambda, const VertexFn& f)
        : spec_(spec), lambda_(lambda), f_(f) {}

    Complex operator()(const VertexPath& x, int n) {
        auto key = std::make_pair(n, x);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        Complex v;
        if (n == 0) {
            v = f_(x);
        } else {
            v = lambda_ * (*this)(x, n - 1);
            const auto& rec = spec_.type(spec_.type_at(x));
            for (size_t s = 0; s < rec.slots.size(); ++s) {
                v -= rec.slots[s].down_prob * (*this)(x.child(static_cast<int>(s)), n - 1);
            }
        }
        cache_.emplace(std::move(key), v);
        return v;
    }

private:
    const TreeSpec& spec_;
    Complex lambda_;
    const VertexFn& f_;
    std::map<std::pair<int, VertexPath>, Complex> cache_;
};

} // namespace

std::vector<std::string> validate_forward(const TreeSpec& spec) {
    std::vector<std::string> out;
    for (int t = 0; t < spec.type_count(); ++t) {
        const auto& rec = spec.type(t);
        if (rec.up_prob != 0.0) {
            out.push_back("type '" + rec.name + "' has nonzero up_prob");
        }
        if (rec.slots.empty()) {
            out.push_back("type '" + rec.name + "' has no children");
            continue;
        }
        double sum = 0.0;
        for (const auto& s : rec.slots) {
            if (!(s.down_prob > 0.0)) {
                out.push_back("type '" + rec.name + "' has a non-positive forward probability");
            }
            sum += s.down_prob;
        }
        if (std::abs(sum - 1.0) > kRowTol) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "type '" << rec.name << "' forward row sum != 1 (got " << sum << ")";
            out.push_back(msg.str());
        }
    }
    return out;
}

void require_forward(const TreeSpec& spec) {
    const auto v = validate_forward(spec);
    if (!v.empty()) {
        std::string msg = "invalid forward spec:";
        for (const auto& s : v) msg += "\n  " + s;
        throw Error(ErrorCode::InvalidSpec, msg);
    }
}

double forward_mass(const TreeSpec& spec, const VertexPath& x) {
    const auto types = spec.types_along(x);
    double m = 1.0;
    for (int i = 0; i < x.depth(); ++i) {
        m *= spec.type(types[static_cast<size_t>(i)]).slots[static_cast<size_t>(x[i])].down_prob;
    }
    return m;
}

BoundaryDistribution forward_measure(const TreeSpec& spec, int depth) {
    std::map<VertexPath, Complex> values;
    for (const auto& x : spec.ball(depth)) {
        values[x] = forward_mass(spec, x);
    }
    return BoundaryDistribution::from_values(spec, std::move(values));
}

double falling_factorial(int t, int r) {
    double v = 1.0;
    for (int i = 0; i < r; ++i) {
        v *= static_cast<double>(t - i);
    }
    return v;
}

Complex forward_kernel(const TreeSpec& spec, const VertexPath& x, const VertexPath& arc,
                       Complex lambda, int r) {
    require_nonzero(lambda);
    if (arc.is_strict_ancestor_of(x)) {
        throw Error(ErrorCode::ArcTooCoarse,
                    "arc " + arc.to_string() + " is a strict ancestor of " + x.to_string());
    }
    if (!x.is_prefix_of(arc)) return 0.0;
    const int d = x.depth();
    return falling_factorial(d, r) * std::pow(lambda, d - r) / forward_mass(spec, x);
}

Complex forward_poisson(const BoundaryDistribution& sigma, const TreeSpec& spec, Complex lambda,
                        const VertexPath& x) {
    require_nonzero(lambda);
    return forward_term(sigma, spec, lambda, x, 0);
}

BoundaryDistribution forward_recover(const TreeSpec& spec, Complex lambda, const VertexFn& h,
                                     int depth, double tol) {
    require_nonzero(lambda);
    std::map<VertexPath, Complex> values;
    for (const auto& x : spec.ball(depth)) {
        values[x] = forward_mass(spec, x) * std::pow(lambda, -x.depth()) * h(x);
    }
    double scale = 1.0;
    for (const auto& [_, v] : values) scale = std::max(scale, std::abs(v));
    const double defect = additivity_defect(spec, values);
    if (defect > tol * scale) {
        throw Error(ErrorCode::NotPolyharmonic,
                    "recovered masses are not additive; the function is not lambda-harmonic for Q");
    }
    return BoundaryDistribution::from_values(spec, std::move(values), tol);
}

Complex forward_poly_synthesize(const std::vector<BoundaryDistribution>& sigma, const TreeSpec& spec,
                                Complex lambda, const VertexPath& x) {
    require_nonzero(lambda);
    Complex f{};
    for (size_t r = 0; r < sigma.size(); ++r) {
        f += forward_term(sigma[r], spec, lambda, x, static_cast<int>(r));
    }
    return f;
}

Complex apply_Q(const TreeSpec& spec, const VertexFn& f, const VertexPath& x) {
    const auto& rec = spec.type(spec.type_at(x));
    Complex v{};
    for (size_t s = 0; s < rec.slots.size(); ++s) {
        v += rec.slots[s].down_prob * f(x.child(static_cast<int>(s)));
    }
    return v;
}

Complex forward_defect(const TreeSpec& spec, Complex lambda, const VertexFn& f, const VertexPath& x,
                       int n) {
    ForwardDefect d(spec, lambda, f);
    return d(x, n);
}

FallingFactorialMatrix falling_factorial_matrix(int n) {
    FallingFactorialMatrix m;
    m.order = n;
    m.coeff.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
    m.coeff[0][0] = 1.0;
    for (int r = 1; r < n; ++r) {
        for (int k = 1; k <= r; ++k) {
            // t(t−1)⋯(t−r+1) = (t − (r−1)) · t(t−1)⋯(t−r+2)
            m.coeff[static_cast<size_t>(k)][static_cast<size_t>(r)] =
                m.at(k - 1, r - 1) - (r - 1) * m.at(k, r - 1);
        }
    }
    return m;
}

std::vector<BoundaryDistribution> to_vertex_power_basis(const TreeSpec& spec,
                                                        const std::vector<BoundaryDistribution>& sigma,
                                                        Complex lambda) {
    require_nonzero(lambda);
    const int n = static_cast<int>(sigma.size());
    const auto a = falling_factorial_matrix(std::max(n, 1));
    std::vector<BoundaryDistribution> out;
    for (int k = 0; k < n; ++k) {
        std::vector<std::pair<Complex, const BoundaryDistribution*>> terms;
        for (int r = k; r < n; ++r) {
            terms.emplace_back(a.at(k, r) * std::pow(lambda, -r), &sigma[static_cast<size_t>(r)]);
        }
        out.push_back(combine(spec, terms));
    }
    return out;
}

std::vector<BoundaryDistribution> from_vertex_power_basis(const TreeSpec& spec,
                                                          const std::vector<BoundaryDistribution>& basis,
                                                          Complex lambda) {
    require_nonzero(lambda);
    const int n = static_cast<int>(basis.size());
    const auto a = falling_factorial_matrix(std::max(n, 1));
    std::vector<BoundaryDistribution> sigma(static_cast<size_t>(n));
    for (int k = n - 1; k >= 0; --k) {
        const Complex diag = a.at(k, k) * std::pow(lambda, -k);
        std::vector<std::pair<Complex, const BoundaryDistribution*>> terms;
        terms.emplace_back(1.0 / diag, &basis[static_cast<size_t>(k)]);
        for (int r = k + 1; r < n; ++r) {
            terms.emplace_back(-a.at(k, r) * std::pow(lambda, -r) / diag,
                               &sigma[static_cast<size_t>(r)]);
        }
        sigma[static_cast<size_t>(k)] = combine(spec, terms);
    }
    return sigma;
}

Complex vertex_power_evaluate(const std::vector<BoundaryDistribution>& basis, const TreeSpec& spec,
                              Complex lambda, const VertexPath& x) {
    Complex f{};
    double power = 1.0;
    for (const auto& b : basis) {
        f += power * forward_poisson(b, spec, lambda, x);
        power *= x.depth();
    }
    return f;
}

std::vector<BoundaryDistribution> forward_decompose(const TreeSpec& spec, Complex lambda,
                                                    const VertexFn& f, int radius, int n,
                                                    int carrier_depth) {
    require_nonzero(lambda);
    if (n < 1) {
        throw Error(ErrorCode::InvalidSpec, "polyharmonic order must be at least 1");
    }
    if (radius < n + carrier_depth) {
        throw Error(ErrorCode::InsufficientRadius,
                    "need radius >= order + carrier depth = " + std::to_string(n + carrier_depth));
    }
    ForwardDefect defect(spec, lambda, f);
    double scale = 1.0;
    for (const auto& x : spec.ball(radius)) {
        scale = std::max(scale, std::abs(defect(x, 0)));
    }
    for (const auto& x : spec.ball(radius - n)) {
        const double d = std::abs(defect(x, n));
        if (d > kDefectTol * scale) {
            throw Error(ErrorCode::NotPolyharmonic,
                        "order-" + std::to_string(n) + " forward defect " + std::to_string(d) +
                            " at " + x.to_string());
        }
    }

    std::vector<BoundaryDistribution> sigma(static_cast<size_t>(n));
    for (int m = n; m >= 1; --m) {
        // (λI−Q) ∫K_Q^(r) dσ = −r ∫K_Q^(r−1) dσ, as for P
        const double sign = (m - 1) % 2 == 0 ? 1.0 : -1.0;
        std::map<VertexPath, Complex> h;
        for (const auto& x : spec.ball(carrier_depth)) {
            Complex v = sign * defect(x, m - 1);
            for (int r = m; r < n; ++r) {
                const int j = r - m + 1;
                v -= factorial(r) / factorial(j) *
                     forward_term(sigma[static_cast<size_t>(r)], spec, lambda, x, j);
            }
            h[x] = v / factorial(m - 1);
        }
        const VertexFn hf = [&h](const VertexPath& x) { return h.at(x); };
        sigma[static_cast<size_t>(m) - 1] = forward_recover(spec, lambda, hf, carrier_depth, kDefectTol);
    }
    return sigma;
}

} // namespace martinkern
