#pragma once

#include <map>
#include <optional>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "martinkern/green_kernel.hpp"
#include "martinkern/jet.hpp"
#include "martinkern/tree_model.hpp"

namespace martinkern {

/**
 * Finitely additive complex set function on boundary arcs.
 *
 * Values are stored on a finite carrier subtree that contains the root, is
 * closed under prefixes and contains either all or none of the children of
 * each carrier vertex. Arcs below a carrier leaf receive the leaf value split
 * uniformly among children, step by step.
 */
class BoundaryDistribution {
public:
    BoundaryDistribution() = default;

    /// Validates the carrier shape and child-sum additivity (relative
    /// tolerance `tol`); throws InvalidSpec otherwise.
    static BoundaryDistribution from_values(const TreeSpec& spec,
                                            std::map<VertexPath, Complex> values,
                                            double tol = 1e-12);
    /// Total mass `total` refined uniformly from the root.
    static BoundaryDistribution uniform(Complex total);

    const std::map<VertexPath, Complex>& values() const noexcept { return values_; }
    int carrier_depth() const;
    Complex total() const { return values_.at(VertexPath{}); }

private:
    std::map<VertexPath, Complex> values_{{VertexPath{}, Complex{}}};
};

/// Largest |ν(∂T_x) − Σ_children ν(∂T_y)| over carrier vertices with children.
double additivity_defect(const TreeSpec& spec, const std::map<VertexPath, Complex>& values);

/// ν(∂T_x) for any vertex x.
Complex arc_value(const TreeSpec& spec, const BoundaryDistribution& nu, const VertexPath& x);

/// Distribution whose values on the full ball of depth `depth` are taken
/// from `nu` (so the carrier covers at least that ball).
BoundaryDistribution refine(const TreeSpec& spec, const BoundaryDistribution& nu, int depth);

/// Σ_i c_i ν_i on the union of the carriers.
BoundaryDistribution combine(const TreeSpec& spec,
                             const std::vector<std::pair<Complex, const BoundaryDistribution*>>& terms);

/// Point mass on the boundary point whose ray follows `ray`, carried to the
/// depth of `ray`.
BoundaryDistribution point_mass(const TreeSpec& spec, const VertexPath& ray, Complex mass = 1.0);

/// Uniformly random vertex of the given depth.
VertexPath random_vertex(const TreeSpec& spec, int depth, std::mt19937_64& rng);

/// Random additive distribution carried on the full ball of depth `depth`.
BoundaryDistribution random_distribution(const TreeSpec& spec, int depth, std::mt19937_64& rng);

/// Locally constant function on the boundary given by its value φ_x on each
/// region ∂T_x minus the arcs of the successors of x in the carrier.
struct LocallyConstantFn {
    std::map<VertexPath, Complex> values;
};

/// Σ_{x∈τ} φ_x (ν(∂T_x) − Σ_{y∈S_τ(x)} ν(∂T_y)).
Complex integrate_locally_constant(const TreeSpec& spec, const LocallyConstantFn& phi,
                                   const BoundaryDistribution& nu);

/// The kernel x ↦ K(x,·|λ) as a locally constant function on the carrier π(o,x).
LocallyConstantFn kernel_function(const JetTable& table, const VertexPath& x);

/// h(x) = ∫ K(x,ξ|λ) dν(ξ) as a jet in λ; coefficient r times r! is h^(r)(x).
Jet poisson_transform(const BoundaryDistribution& nu, const JetTable& table, const VertexPath& x);

/**
 * A λ-harmonic function: either the Poisson transform of a distribution or
 * an explicit table of values on a finite set of vertices.
 */
class HarmonicEvaluator {
public:
    static HarmonicEvaluator from_distribution(BoundaryDistribution nu, const JetTable& table);
    /// Checks P h = λ h at every vertex whose neighbours are all tabulated.
    static HarmonicEvaluator from_table(const TreeSpec& spec, Complex lambda,
                                        std::map<VertexPath, Complex> values, double tol = 1e-10);

    Complex lambda() const noexcept { return lambda_; }
    Complex operator()(const VertexPath& x) const;
    /// Tabulated vertices; empty for distribution-backed evaluators.
    const std::map<VertexPath, Complex>& table() const noexcept { return values_; }

private:
    Complex lambda_{};
    std::map<VertexPath, Complex> values_;
    std::optional<std::pair<BoundaryDistribution, JetTable>> backing_;
};

/// Random λ-harmonic table on the ball of depth `radius` built top-down:
/// free values at all children but one, which is solved from P h = λ h.
std::map<VertexPath, Complex> random_harmonic_table(const TreeSpec& spec, Complex lambda,
                                                    int radius, std::mt19937_64& rng);

/// ν^h(∂T_x): h(o) at the root, otherwise
/// F(o,x) (h(x) − F(x,x^-) h(x^-)) / (1 − F(x^-,x) F(x,x^-)).
Complex recover_distribution(const HarmonicEvaluator& h, const JetTable& table,
                             const VertexPath& x);
/// ν^h on the full ball of the given depth; additivity checked at `tol`.
BoundaryDistribution recover_distribution(const HarmonicEvaluator& h, const JetTable& table,
                                          int depth, double tol = 1e-10);

} // namespace martinkern
