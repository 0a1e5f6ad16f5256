#include "martinkern/isotropic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "martinkern/errors.hpp"

namespace martinkern {

namespace {

constexpr double kCutTol = 1e-9;
constexpr double kBranchResidual = 1e-10;

Jet branch_F(const IsotropicParams& params, int order, bool principal) {
    const double q = params.q;
    const double rho = params.rho();
    const Jet lam = Jet::variable(order, params.lambda);
    const Jet s = sqrt(1.0 - rho * rho / (lam * lam));
    const Jet c = lam * ((q + 1.0) / (2.0 * q));
    return principal ? c * (1.0 - s) : c * (1.0 + s);
}

bool admissible(const IsotropicParams& params, Complex F) {
    const double p = 1.0 / (params.q + 1.0);
    const Complex residual = params.lambda * F - p - params.q * p * F * F;
    return std::abs(residual) < kBranchResidual && std::abs(F * F) < 1.0;
}

} // namespace

double IsotropicParams::rho() const {
    return 2.0 * std::sqrt(static_cast<double>(q)) / (q + 1.0);
}

IsotropicParams make_isotropic(int q, Complex lambda) {
    if (q < 2) {
        throw Error(ErrorCode::InvalidSpec, "isotropic walk needs q >= 2");
    }
    IsotropicParams p{q, lambda};
    const double rho = p.rho();
    const double over = std::abs(lambda.real()) - rho;
    const double dist = over > 0.0 ? std::hypot(over, lambda.imag()) : std::abs(lambda.imag());
    if (dist <= kCutTol) {
        throw Error(ErrorCode::BranchCut, "lambda lies on the spectrum [-rho, rho]");
    }
    return p;
}

bool uses_principal_branch(const IsotropicParams& params) {
    if (admissible(params, branch_F(params, 0, true).value())) return true;
    if (admissible(params, branch_F(params, 0, false).value())) return false;
    throw Error(ErrorCode::BranchCut, "no admissible square-root branch");
}

Jet closed_F(const IsotropicParams& params, int order) {
    return branch_F(params, order, uses_principal_branch(params));
}

Jet closed_f(const IsotropicParams& params, int order) {
    const double rho = params.rho();
    const Jet lam = Jet::variable(order, params.lambda);
    const Jet s = sqrt(1.0 - rho * rho / (lam * lam));
    // F'/F is −1/(λs) on the principal branch and +1/(λs) on the other
    const Complex sign = uses_principal_branch(params) ? -1.0 : 1.0;
    return sign / (lam * s);
}

int horocycle_index(const VertexPath& x, const VertexPath& arc) {
    if (arc.is_strict_ancestor_of(x)) {
        throw Error(ErrorCode::ArcTooCoarse,
                    "arc " + arc.to_string() + " is a strict ancestor of " + x.to_string());
    }
    const int c = confluent(x, arc).depth();
    return x.depth() - 2 * c;
}

Complex HorocycleCoeffs::determinant() const {
    Complex d = 1.0;
    for (int r = 0; r < order; ++r) {
        d *= at(r, r);
    }
    return d;
}

HorocycleCoeffs horocycle_coeffs(const IsotropicParams& params, int n) {
    if (n < 1) {
        throw Error(ErrorCode::InvalidSpec, "order must be at least 1");
    }
    const int top = n - 1;
    HorocycleCoeffs out;
    out.order = n;
    out.coeff.assign(static_cast<size_t>(n), std::vector<Complex>(static_cast<size_t>(n)));
    out.coeff[0][0] = 1.0;

    // f = F'/F with enough orders for top−1 further derivatives
    const Jet F = closed_F(params, std::max(top, 1));
    const Jet f = F.differentiated() / F.truncated(F.order() - 1);
    out.f = f.value();
    if (top == 0) return out;

    // jets[k] holds f_{k,r} at the current r, carrying order top − r
    std::vector<Jet> jets(static_cast<size_t>(n), Jet(0));
    jets[1] = f.truncated(top - 1);
    out.coeff[1][1] = jets[1].value();
    for (int r = 2; r <= top; ++r) {
        const int ord = top - r;
        std::vector<Jet> next(static_cast<size_t>(n), Jet(ord));
        for (int k = 1; k <= r; ++k) {
            Jet v(ord);
            if (k <= r - 1) v += jets[static_cast<size_t>(k)].differentiated().truncated(ord);
            if (k >= 2) v += f.truncated(ord) * jets[static_cast<size_t>(k) - 1].truncated(ord);
            next[static_cast<size_t>(k)] = v;
            out.coeff[static_cast<size_t>(k)][static_cast<size_t>(r)] = v.value();
        }
        jets = std::move(next);
    }
    return out;
}

Complex isotropic_kernel(const IsotropicParams& params, const HorocycleCoeffs& coeffs,
                         const VertexPath& x, const VertexPath& arc, int r) {
    const int hor = horocycle_index(x, arc);
    const Complex F = closed_F(params, 0).value();
    Complex sum{};
    Complex power = 1.0;
    for (int k = 0; k <= r; ++k) {
        sum += power * coeffs.at(k, r);
        power *= static_cast<double>(hor);
    }
    return std::pow(F, hor) * sum;
}

std::vector<BoundaryDistribution> to_horocycle_basis(const TreeSpec& spec,
                                                     const PolyRepresentation& rep,
                                                     const HorocycleCoeffs& coeffs) {
    const int n = rep.order();
    if (coeffs.order < n) {
        throw Error(ErrorCode::InvalidSpec, "horocycle coefficients of too small an order");
    }
    std::vector<BoundaryDistribution> out;
    for (int k = 0; k < n; ++k) {
        std::vector<std::pair<Complex, const BoundaryDistribution*>> terms;
        for (int r = k; r < n; ++r) {
            terms.emplace_back(coeffs.at(k, r), &rep.distributions[static_cast<size_t>(r)]);
        }
        out.push_back(combine(spec, terms));
    }
    return out;
}

PolyRepresentation from_horocycle_basis(const TreeSpec& spec, Complex lambda,
                                        const std::vector<BoundaryDistribution>& basis,
                                        const HorocycleCoeffs& coeffs) {
    const int n = static_cast<int>(basis.size());
    PolyRepresentation rep;
    rep.lambda = lambda;
    rep.distributions.resize(static_cast<size_t>(n));
    for (int k = n - 1; k >= 0; --k) {
        std::vector<std::pair<Complex, const BoundaryDistribution*>> terms;
        const Complex diag = coeffs.at(k, k);
        terms.emplace_back(1.0 / diag, &basis[static_cast<size_t>(k)]);
        for (int r = k + 1; r < n; ++r) {
            terms.emplace_back(-coeffs.at(k, r) / diag, &rep.distributions[static_cast<size_t>(r)]);
        }
        rep.distributions[static_cast<size_t>(k)] = combine(spec, terms);
    }
    return rep;
}

Complex horocycle_evaluate(const TreeSpec& spec, const IsotropicParams& params,
                           const std::vector<BoundaryDistribution>& basis, const VertexPath& x) {
    const Complex F = closed_F(params, 0).value();
    Complex total{};
    for (size_t k = 0; k < basis.size(); ++k) {
        LocallyConstantFn phi;
        for (int i = 0; i <= x.depth(); ++i) {
            const int hor = x.depth() - 2 * i;
            phi.values[x.prefix(i)] = std::pow(F, hor) * std::pow(static_cast<double>(hor), static_cast<int>(k));
        }
        total += integrate_locally_constant(spec, phi, basis[k]);
    }
    return total;
}

} // namespace martinkern
