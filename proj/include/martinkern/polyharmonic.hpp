#pragma once

#include <map>
#include <utility>
#include <vector>

#include "martinkern/boundary.hpp"
#include "martinkern/green_kernel.hpp"
#include "martinkern/tree_model.hpp"

namespace martinkern {

/// f(x) = Σ_{r<n} ∫ K^(r)(x,ξ|λ) dν_r(ξ), where K^(r) is the r-th λ-derivative.
struct PolyRepresentation {
    Complex lambda{};
    std::vector<BoundaryDistribution> distributions;

    int order() const noexcept { return static_cast<int>(distributions.size()); }
};

/// Value of the represented function at x. The table order must be at least n−1.
Complex synthesize(const PolyRepresentation& rep, const JetTable& table, const VertexPath& x);

/**
 * Memoized (λI−P)^n f. Values of f are requested only on the ball of radius
 * n around the evaluation point.
 */
class DefectEvaluator {
public:
    DefectEvaluator(const TreeSpec& spec, Complex lambda, VertexFn f);

    Complex operator()(const VertexPath& x, int n);

private:
    const TreeSpec& spec_;
    Complex lambda_;
    VertexFn f_;
    std::map<std::pair<int, VertexPath>, Complex> cache_;
};

/// (λI−P)^n f (x).
Complex apply_defect(const TreeSpec& spec, Complex lambda, const VertexFn& f, const VertexPath& x,
                     int n);

/// Relative tolerance for accepting input as polyharmonic.
inline constexpr double kDefectTol = 1e-8;

/**
 * Distributions ν_0..ν_{n−1} on the full ball of depth `carrier_depth` for a
 * function f known on the ball of radius `radius`.
 *
 * Peels one order at a time: (λI−P)^{m−1} f determines the Poisson transform
 * of ν_{m−1} once the higher distributions are known, and ν_{m−1} is then
 * recovered from it. Throws InsufficientRadius unless radius ≥ n +
 * carrier_depth and NotPolyharmonic when (λI−P)^n f exceeds
 * 1e−8·max(1, sup|f|) somewhere on the ball of radius `radius` − n.
 */
PolyRepresentation decompose(const JetTable& table, const VertexFn& f, int radius, int n,
                             int carrier_depth = 3);

} // namespace martinkern
