#pragma once

#include <optional>
#include <string>
#include <vector>

#include "martinkern/jet.hpp"
#include "martinkern/tree_model.hpp"

namespace martinkern {

struct SolverOptions {
    /// Sup-norm bound on the change between successive iterates.
    double tolerance = 1e-13;
    int max_iter = 100000;
    /// When set, |λ| must exceed it.
    std::optional<double> rho_bound;
};

/**
 * Upward first-passage jets F(x, x^- | λ) per vertex type, expanded around a
 * fixed base point λ. Owns a copy of the tree spec so that every downstream
 * evaluation uses the spec the table was solved for.
 */
class JetTable {
public:
    const TreeSpec& spec() const noexcept { return spec_; }
    Complex lambda() const noexcept { return lambda_; }
    int order() const noexcept { return order_; }
    /// F_up for type t; the root type carries an unused zero jet.
    const Jet& f_up(int t) const { return f_up_.at(static_cast<size_t>(t)); }
    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    friend JetTable solve_F_up(const TreeSpec&, Complex, int, const SolverOptions&);

    TreeSpec spec_;
    Complex lambda_{};
    int order_ = 0;
    std::vector<Jet> f_up_;
    int iterations_ = 0;
    double residual_ = 0.0;
};

/**
 * Fixed point of F_up(t) = u(t) / (λ − Σ_s p_f(t,s) F_up(c(t,s))) in jet
 * arithmetic, iterated from the zero jet.
 *
 * Throws NonConvergence when the iteration does not settle within
 * `max_iter`, leaves the positive cone for real λ > 0, or settles on a point
 * violating Σ_s p_f |F_up| < |λ| (λ inside the spectral disk).
 */
JetTable solve_F_up(const TreeSpec& spec, Complex lambda, int order,
                    const SolverOptions& options = {});

/// Downward first-passage jets F(x_{i-1}, x_i) along the geodesic o → x.
std::vector<Jet> F_down_path(const JetTable& table, const VertexPath& x);
/// F(x, y | λ) as the product of edge jets along the geodesic.
Jet first_passage(const JetTable& table, const VertexPath& x, const VertexPath& y);
/// U(x, x | λ), the first-return generating function.
Jet return_function(const JetTable& table, const VertexPath& x);
/// G(x, x | λ) = 1 / (λ − U(x, x | λ)).
Jet green_diag(const JetTable& table, const VertexPath& x);
/// G(x, y | λ) = F(x, y | λ) G(y, y | λ).
Jet green(const JetTable& table, const VertexPath& x, const VertexPath& y);

/// K(x, w | λ) = F(x, x∧w) / F(o, x∧w) for a vertex w.
Jet kernel_at(const JetTable& table, const VertexPath& x, const VertexPath& w);
/// Kernel value on the arc ∂T_arc; the arc must not be a strict ancestor of x.
Jet martin_kernel(const JetTable& table, const VertexPath& x, const VertexPath& arc);

enum class Probe { Converged, Diverged, Undetermined };

/// Order-0 convergence probe of the fixed-point iteration at real λ > 0.
/// Diverged means λ ≤ ρ rigorously (the iterates left the positive cone).
Probe probe_convergence(const TreeSpec& spec, double lambda, int max_iter = 100000);

struct RhoBracket {
    double lo = 0.0;
    double hi = 1.0;
    /// max_n p^(2n)(o,o)^{1/2n} from the series oracle.
    double series_lo = 0.0;
    /// Largest λ at which the fixed-point iteration provably diverged.
    double divergence_lo = 0.0;
    int series_steps = 0;
    bool budget_exhausted = false;

    double width() const { return hi - lo; }
    bool contains(double rho) const { return lo <= rho && rho <= hi; }
};

struct RhoOptions {
    int series_radius = 40;
    double target_width = 5e-4;
    int max_iter = 100000;
};

RhoBracket estimate_rho(const TreeSpec& spec, const RhoOptions& options = {});

struct EdgeTypeResidual {
    std::string name;
    Complex G_j{};
    double reversibility = 0.0;
    double quadratic = 0.0;
    /// Residual of the explicit real-λ root, NaN for complex λ.
    double explicit_root = 0.0;
};

struct GroupReport {
    Complex lambda{};
    Complex G{};
    std::vector<EdgeTypeResidual> edges;
    double max_reversibility = 0.0;
    double max_quadratic = 0.0;
    bool green_nonvanishing = false;
};

/// Residuals of p_j G_{-j} = p_{-j} G_j and p_{-j} G_j² + G_j − p_j G² = 0
/// on the tree generated by the edge-type model.
GroupReport group_invariant_checks(const EdgeTypeModel& model, Complex lambda,
                                   const SolverOptions& options = {});

} // namespace martinkern
