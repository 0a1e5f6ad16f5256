#pragma once

#include <vector>

#include "martinkern/boundary.hpp"
#include "martinkern/jet.hpp"
#include "martinkern/polyharmonic.hpp"
#include "martinkern/tree_model.hpp"

namespace martinkern {

/// Simple random walk on T_q at spectral parameter λ.
struct IsotropicParams {
    int q = 2;
    Complex lambda{};

    double rho() const;
};

/// Checks q ≥ 2 (InvalidSpec) and that λ keeps distance > 1e−9 from
/// [−ρ, ρ] (BranchCut).
IsotropicParams make_isotropic(int q, Complex lambda);

/// True when the principal square root gives the admissible solution
/// (quadratic residual < 1e−10 and |F²| < 1); otherwise the other root is used.
bool uses_principal_branch(const IsotropicParams& params);

/// F(x, x^- | λ) = ((q+1)λ/2q)(1 − sqrt(1 − ρ²/λ²)) as a jet of the given order.
Jet closed_F(const IsotropicParams& params, int order);
/// F'/F = −1/(λ sqrt(1 − ρ²/λ²)) on the principal branch.
Jet closed_f(const IsotropicParams& params, int order);

/// d(x, x∧arc) − d(o, x∧arc); ArcTooCoarse if arc is a strict ancestor of x.
int horocycle_index(const VertexPath& x, const VertexPath& arc);

/**
 * Coefficients f_{k,r}(λ), 0 ≤ k ≤ r < n, with K^(r) = K Σ_k hor^k f_{k,r}.
 * f_{0,0} = 1, f_{0,r} = 0 for r ≥ 1, f_{1,1} = F'/F and
 * f_{k,r} = f'_{k,r−1} + f f_{k−1,r−1}.
 */
struct HorocycleCoeffs {
    int order = 1;
    Complex f{};
    /// coeff[k][r]; zero below the diagonal.
    std::vector<std::vector<Complex>> coeff;

    Complex at(int k, int r) const { return coeff[static_cast<size_t>(k)][static_cast<size_t>(r)]; }
    Complex determinant() const;
};

HorocycleCoeffs horocycle_coeffs(const IsotropicParams& params, int n);

/// K^(r)(x, arc | λ) from the horocycle expansion.
Complex isotropic_kernel(const IsotropicParams& params, const HorocycleCoeffs& coeffs,
                         const VertexPath& x, const VertexPath& arc, int r);

/// ν̄_k = Σ_{r≥k} f_{k,r} ν_r.
std::vector<BoundaryDistribution> to_horocycle_basis(const TreeSpec& spec,
                                                     const PolyRepresentation& rep,
                                                     const HorocycleCoeffs& coeffs);
/// Back-substitution for the triangular system above.
PolyRepresentation from_horocycle_basis(const TreeSpec& spec, Complex lambda,
                                        const std::vector<BoundaryDistribution>& basis,
                                        const HorocycleCoeffs& coeffs);

/// Σ_k ∫ K(x,ξ|λ) hor(x,ξ)^k dν̄_k(ξ).
Complex horocycle_evaluate(const TreeSpec& spec, const IsotropicParams& params,
                           const std::vector<BoundaryDistribution>& basis, const VertexPath& x);

} // namespace martinkern
