#include "martinkern/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "martinkern/errors.hpp"

namespace martinkern {

namespace {

constexpr double kDenominatorTol = 1e-12;

double scale_of(const std::map<VertexPath, Complex>& values) {
    double s = 1.0;
    for (const auto& [_, v] : values) {
        s = std::max(s, std::abs(v));
    }
    return s;
}

Complex random_complex(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    const double re = g(rng);
    const double im = g(rng);
    return {re, im};
}

} // namespace

double additivity_defect(const TreeSpec& spec, const std::map<VertexPath, Complex>& values) {
    double worst = 0.0;
    for (const auto& [x, v] : values) {
        const int n = spec.child_count(spec.type_at(x));
        if (n == 0 || !values.contains(x.child(0))) continue;
        Complex sum{};
        for (int s = 0; s < n; ++s) {
            auto it = values.find(x.child(s));
            if (it != values.end()) sum += it->second;
        }
        worst = std::max(worst, std::abs(v - sum));
    }
    return worst;
}

BoundaryDistribution BoundaryDistribution::from_values(const TreeSpec& spec,
                                                       std::map<VertexPath, Complex> values,
                                                       double tol) {
    if (!values.contains(VertexPath{})) {
        throw Error(ErrorCode::InvalidSpec, "distribution carrier must contain the root");
    }
    for (const auto& [x, _] : values) {
        if (!spec.contains(x)) {
            throw Error(ErrorCode::InvalidSpec, "carrier vertex " + x.to_string() + " not in tree");
        }
        if (x.is_root()) continue;
        const VertexPath p = x.parent();
        if (!values.contains(p)) {
            throw Error(ErrorCode::InvalidSpec, "carrier not closed under prefixes at " + x.to_string());
        }
        const int n = spec.child_count(spec.type_at(p));
        for (int s = 0; s < n; ++s) {
            if (!values.contains(p.child(s))) {
                throw Error(ErrorCode::InvalidSpec,
                            "carrier holds " + x.to_string() + " but not its sibling " +
                                p.child(s).to_string());
            }
        }
    }
    const double defect = additivity_defect(spec, values);
    if (defect > tol * scale_of(values)) {
        throw Error(ErrorCode::InvalidSpec,
                    "distribution is not additive (defect " + std::to_string(defect) + ")");
    }
    BoundaryDistribution nu;
    nu.values_ = std::move(values);
    return nu;
}

BoundaryDistribution BoundaryDistribution::uniform(Complex total) {
    BoundaryDistribution nu;
    nu.values_[VertexPath{}] = total;
    return nu;
}

int BoundaryDistribution::carrier_depth() const {
    int d = 0;
    for (const auto& [x, _] : values_) {
        d = std::max(d, x.depth());
    }
    return d;
}

Complex arc_value(const TreeSpec& spec, const BoundaryDistribution& nu, const VertexPath& x) {
    const auto& values = nu.values();
    if (auto it = values.find(x); it != values.end()) {
        return it->second;
    }
    const auto types = spec.types_along(x);
    int d = 0;
    while (d < x.depth() && values.contains(x.prefix(d + 1))) {
        ++d;
    }
    Complex v = values.at(x.prefix(d));
    for (int i = d; i < x.depth(); ++i) {
        v /= static_cast<double>(spec.child_count(types[static_cast<size_t>(i)]));
    }
    return v;
}

BoundaryDistribution refine(const TreeSpec& spec, const BoundaryDistribution& nu, int depth) {
    auto values = nu.values();
    for (const auto& x : spec.ball(depth)) {
        if (!values.contains(x)) {
            values[x] = arc_value(spec, nu, x);
        }
    }
    return BoundaryDistribution::from_values(spec, std::move(values), 1e-9);
}

BoundaryDistribution combine(const TreeSpec& spec,
                             const std::vector<std::pair<Complex, const BoundaryDistribution*>>& terms) {
    std::map<VertexPath, Complex> values;
    for (const auto& [_, nu] : terms) {
        for (const auto& [x, v] : nu->values()) {
            values[x] = Complex{};
        }
    }
    values[VertexPath{}] = Complex{};
    for (auto& [x, v] : values) {
        for (const auto& [c, nu] : terms) {
            v += c * arc_value(spec, *nu, x);
        }
    }
    return BoundaryDistribution::from_values(spec, std::move(values), 1e-9);
}

BoundaryDistribution point_mass(const TreeSpec& spec, const VertexPath& ray, Complex mass) {
    std::map<VertexPath, Complex> values;
    for (int d = 0; d <= ray.depth(); ++d) {
        const VertexPath v = ray.prefix(d);
        values[v] = mass;
        if (d == ray.depth()) break;
        const int n = spec.child_count(spec.type_at(v));
        for (int s = 0; s < n; ++s) {
            values.try_emplace(v.child(s), Complex{});
        }
    }
    return BoundaryDistribution::from_values(spec, std::move(values));
}

VertexPath random_vertex(const TreeSpec& spec, int depth, std::mt19937_64& rng) {
    VertexPath x;
    for (int d = 0; d < depth; ++d) {
        std::uniform_int_distribution<int> pick(0, spec.child_count(spec.type_at(x)) - 1);
        x = x.child(pick(rng));
    }
    return x;
}

BoundaryDistribution random_distribution(const TreeSpec& spec, int depth, std::mt19937_64& rng) {
    std::map<VertexPath, Complex> values;
    values[VertexPath{}] = random_complex(rng);
    for (const auto& x : spec.ball(depth - 1)) {
        const int n = spec.child_count(spec.type_at(x));
        Complex rest = values.at(x);
        for (int s = 0; s + 1 < n; ++s) {
            const Complex v = random_complex(rng);
            values[x.child(s)] = v;
            rest -= v;
        }
        values[x.child(n - 1)] = rest;
    }
    return BoundaryDistribution::from_values(spec, std::move(values));
}

Complex integrate_locally_constant(const TreeSpec& spec, const LocallyConstantFn& phi,
                                   const BoundaryDistribution& nu) {
    Complex total{};
    for (const auto& [x, value] : phi.values) {
        Complex region = arc_value(spec, nu, x);
        const int n = spec.child_count(spec.type_at(x));
        for (int s = 0; s < n; ++s) {
            const VertexPath y = x.child(s);
            if (phi.values.contains(y)) {
                region -= arc_value(spec, nu, y);
            }
        }
        total += value * region;
    }
    return total;
}

namespace {

// K(x, x_i | λ) for every vertex x_i on the geodesic o → x.
std::vector<Jet> path_kernels(const JetTable& table, const VertexPath& x) {
    const auto& spec = table.spec();
    const int k = x.depth();
    const auto types = spec.types_along(x);
    const auto down = F_down_path(table, x);
    std::vector<Jet> up_suffix(static_cast<size_t>(k) + 1, Jet(table.order(), 1.0));
    for (int i = k - 1; i >= 0; --i) {
        up_suffix[static_cast<size_t>(i)] =
            up_suffix[static_cast<size_t>(i) + 1] * table.f_up(types[static_cast<size_t>(i) + 1]);
    }
    std::vector<Jet> out;
    out.reserve(static_cast<size_t>(k) + 1);
    Jet down_prefix(table.order(), 1.0);
    for (int i = 0; i <= k; ++i) {
        if (i > 0) down_prefix *= down[static_cast<size_t>(i) - 1];
        out.push_back(up_suffix[static_cast<size_t>(i)] / down_prefix);
    }
    return out;
}

} // namespace

LocallyConstantFn kernel_function(const JetTable& table, const VertexPath& x) {
    const auto kernels = path_kernels(table, x);
    LocallyConstantFn phi;
    for (int i = 0; i <= x.depth(); ++i) {
        phi.values[x.prefix(i)] = kernels[static_cast<size_t>(i)].value();
    }
    return phi;
}

Jet poisson_transform(const BoundaryDistribution& nu, const JetTable& table, const VertexPath& x) {
    const auto& spec = table.spec();
    const auto kernels = path_kernels(table, x);
    const int k = x.depth();
    std::vector<Complex> arcs(static_cast<size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) {
        arcs[static_cast<size_t>(i)] = arc_value(spec, nu, x.prefix(i));
    }
    Jet h = kernels[static_cast<size_t>(k)] * arcs[static_cast<size_t>(k)];
    for (int i = 0; i < k; ++i) {
        h += kernels[static_cast<size_t>(i)] *
             (arcs[static_cast<size_t>(i)] - arcs[static_cast<size_t>(i) + 1]);
    }
    return h;
}

HarmonicEvaluator HarmonicEvaluator::from_distribution(BoundaryDistribution nu, const JetTable& table) {
    HarmonicEvaluator h;
    h.lambda_ = table.lambda();
    h.backing_.emplace(std::move(nu), table);
    return h;
}

HarmonicEvaluator HarmonicEvaluator::from_table(const TreeSpec& spec, Complex lambda,
                                                std::map<VertexPath, Complex> values, double tol) {
    const double scale = scale_of(values);
    for (const auto& [x, hx] : values) {
        bool interior = true;
        Complex ph{};
        for (const auto& [y, p] : spec.neighbours(x)) {
            auto it = values.find(y);
            if (it == values.end()) {
                interior = false;
                break;
            }
            ph += p * it->second;
        }
        if (interior && std::abs(ph - lambda * hx) > tol * scale) {
            throw Error(ErrorCode::NotPolyharmonic,
                        "tabulated function is not lambda-harmonic at " + x.to_string() + " (residual " + std::to_string(std::abs(ph - lambda * hx) / scale) + ")");
        }
    }
    HarmonicEvaluator h;
    h.lambda_ = lambda;
    h.values_ = std::move(values);
    return h;
}

Complex HarmonicEvaluator::operator()(const VertexPath& x) const {
    if (backing_) {
        return poisson_transform(backing_->first, backing_->second, x).value();
    }
    auto it = values_.find(x);
    if (it == values_.end()) {
        throw Error(ErrorCode::OutOfDomain, x.to_string() + " is outside the tabulated ball");
    }
    return it->second;
}

std::map<VertexPath, Complex> random_harmonic_table(const TreeSpec& spec, Complex lambda,
                                                    int radius, std::mt19937_64& rng) {
    std::map<VertexPath, Complex> h;
    h[VertexPath{}] = random_complex(rng);
    for (const auto& x : spec.ball(radius - 1)) {
        const auto& rec = spec.type(spec.type_at(x));
        Complex rest = lambda * h.at(x);
        if (!x.is_root()) {
            rest -= rec.up_prob * h.at(x.parent());
        }
        const int n = static_cast<int>(rec.slots.size());
        for (int s = 0; s + 1 < n; ++s) {
            const Complex v = random_complex(rng);
            h[x.child(s)] = v;
            rest -= rec.slots[static_cast<size_t>(s)].down_prob * v;
        }
        h[x.child(n - 1)] = rest / rec.slots[static_cast<size_t>(n) - 1].down_prob;
    }
    return h;
}

Complex recover_distribution(const HarmonicEvaluator& h, const JetTable& table, const VertexPath& x) {
    if (x.is_root()) {
        return h(x);
    }
    const auto& spec = table.spec();
    const auto down = F_down_path(table, x);
    Complex f_root_to_x = 1.0;
    for (const auto& j : down) {
        f_root_to_x *= j.value();
    }
    const Complex f_up = table.f_up(spec.type_at(x)).value();
    const Complex f_dn = down.back().value();
    const Complex denom = 1.0 - f_dn * f_up;
    if (std::abs(denom) < kDenominatorTol) {
        throw Error(ErrorCode::DenominatorNearOne,
                    "1 - F(x^-,x)F(x,x^-) vanishes at " + x.to_string());
    }
    return f_root_to_x * (h(x) - f_up * h(x.parent())) / denom;
}

BoundaryDistribution recover_distribution(const HarmonicEvaluator& h, const JetTable& table,
                                          int depth, double tol) {
    const auto& spec = table.spec();
    std::map<VertexPath, Complex> values;
    for (const auto& x : spec.ball(depth)) {
        values[x] = recover_distribution(h, table, x);
    }
    const double defect = additivity_defect(spec, values);
    if (defect > tol * scale_of(values)) {
        throw Error(ErrorCode::NotPolyharmonic,
                    "recovered masses are not additive (defect " + std::to_string(defect) +
                        "); the function is not lambda-harmonic");
    }
    return BoundaryDistribution::from_values(spec, std::move(values), tol);
}

} // namespace martinkern
