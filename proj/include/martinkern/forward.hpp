#pragma once

#include <string>
#include <vector>

#include "martinkern/boundary.hpp"
#include "martinkern/tree_model.hpp"

namespace martinkern {

/// Violations of the forward-only shape: u(t) = 0 and child rows summing to 1
/// for every type, the root type included. The root type may reappear as a child.
std::vector<std::string> validate_forward(const TreeSpec& spec);
void require_forward(const TreeSpec& spec);

/// q^(|x|)(o, x), the product of forward probabilities along the geodesic.
double forward_mass(const TreeSpec& spec, const VertexPath& x);
/// The boundary measure ∂T_x ↦ q^(|x|)(o, x) carried on the ball of depth `depth`.
BoundaryDistribution forward_measure(const TreeSpec& spec, int depth);

/// t(t−1)⋯(t−r+1).
double falling_factorial(int t, int r);

/// r-th λ-derivative of λ^{|x|}/q^(|x|)(o,x) when x lies on the ray of arc, else 0.
Complex forward_kernel(const TreeSpec& spec, const VertexPath& x, const VertexPath& arc,
                       Complex lambda, int r);

/// h(x) = λ^{|x|} σ(∂T_x) / q^(|x|)(o, x).
Complex forward_poisson(const BoundaryDistribution& sigma, const TreeSpec& spec, Complex lambda,
                        const VertexPath& x);
/// σ(∂T_x) = q^(|x|)(o, x) λ^{−|x|} h(x) on the ball of depth `depth`.
BoundaryDistribution forward_recover(const TreeSpec& spec, Complex lambda, const VertexFn& h,
                                     int depth, double tol = 1e-10);

/// Σ_r ∫ K_Q^(r)(x, ξ | λ) dσ_r(ξ).
Complex forward_poly_synthesize(const std::vector<BoundaryDistribution>& sigma, const TreeSpec& spec,
                                Complex lambda, const VertexPath& x);

/// (Q f)(x) = Σ_children q(x, y) f(y).
Complex apply_Q(const TreeSpec& spec, const VertexFn& f, const VertexPath& x);
/// (λI−Q)^n f (x); reads f on descendants of x up to depth |x| + n.
Complex forward_defect(const TreeSpec& spec, Complex lambda, const VertexFn& f, const VertexPath& x,
                       int n);

/// Signed Stirling numbers a_{k,r}, 0 ≤ k ≤ r < n, with t(t−1)⋯(t−r+1) = Σ_k a_{k,r} t^k.
struct FallingFactorialMatrix {
    int order = 1;
    std::vector<std::vector<double>> coeff;

    double at(int k, int r) const { return coeff[static_cast<size_t>(k)][static_cast<size_t>(r)]; }
};

FallingFactorialMatrix falling_factorial_matrix(int n);

/// σ̄_k = Σ_{r≥k} a_{k,r} λ^{−r} σ_r, so that f(x) = Σ_k |x|^k h_k(x) with
/// h_k the forward Poisson transform of σ̄_k.
std::vector<BoundaryDistribution> to_vertex_power_basis(const TreeSpec& spec,
                                                        const std::vector<BoundaryDistribution>& sigma,
                                                        Complex lambda);
std::vector<BoundaryDistribution> from_vertex_power_basis(const TreeSpec& spec,
                                                          const std::vector<BoundaryDistribution>& basis,
                                                          Complex lambda);
/// Σ_k |x|^k h_k(x).
Complex vertex_power_evaluate(const std::vector<BoundaryDistribution>& basis, const TreeSpec& spec,
                              Complex lambda, const VertexPath& x);

/**
 * σ_0..σ_{n−1} on the ball of depth `carrier_depth` from f known on the ball
 * of radius `radius`, peeling one order at a time with (λI−Q) defects.
 * Needs radius ≥ n + carrier_depth (InsufficientRadius); NotPolyharmonic when
 * (λI−Q)^n f exceeds 1e−8·max(1, sup|f|) on the ball of radius `radius` − n.
 */
std::vector<BoundaryDistribution> forward_decompose(const TreeSpec& spec, Complex lambda,
                                                    const VertexFn& f, int radius, int n,
                                                    int carrier_depth = 3);

} // namespace martinkern
