#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "martinkern/tree_model.hpp"

namespace martinkern {

/// Block budget for truncated balls: MARTINKERN_MAX_BALL or 5·10^6.
std::size_t default_max_ball();

/**
 * Ball of radius N around `center` on which n-step probabilities are exact
 * for n ≤ N.
 *
 * Vertices on the geodesics from the root to the center and to every marked
 * vertex are kept individually. Every other vertex hangs below some such
 * spine vertex s and is lumped with all vertices hanging below s that share
 * its sequence of cone types. The lumping is exact (the chain is strongly
 * lumpable), so probabilities at resolved vertices are those of the
 * infinite tree while the ball stays polynomial in N for trees whose
 * type sequences branch slowly.
 */
class TruncatedBall {
public:
    TruncatedBall(const TreeSpec& spec, VertexPath center, int radius,
                  std::vector<VertexPath> marked = {},
                  std::size_t max_blocks = default_max_ball());

    const VertexPath& center() const noexcept { return center_; }
    int radius() const noexcept { return radius_; }
    std::size_t block_count() const noexcept { return blocks_.size(); }
    std::optional<int> index_of(const VertexPath& y) const;
    int center_index() const noexcept { return center_index_; }
    double measure(const VertexPath& y) const;

    /// One application of the transition operator to a mass vector.
    std::vector<double> step(const std::vector<double>& mass) const;

private:
    struct Edge {
        int to;
        double prob;
    };

    TreeSpec spec_;
    VertexPath center_;
    int radius_;
    std::vector<std::vector<Edge>> blocks_;
    std::map<VertexPath, int> resolved_;
    int center_index_ = 0;
};

/// p^(n)(center, y); y must be resolved and n ≤ radius.
double n_step(const TruncatedBall& ball, const VertexPath& y, int n);
/// p^(n)(center, y) for n = 0..N.
std::vector<double> transition_sequence(const TruncatedBall& ball, const VertexPath& y, int N);
/// f^(n)(center, y) for n = 0..N via the walk killed at y.
std::vector<double> first_passage_sequence(const TruncatedBall& ball, const VertexPath& y, int N);

struct SeriesValue {
    std::complex<double> value{};
    /// Geometric tail estimate with the constant fitted on the last terms.
    double tail_bound = 0.0;
    /// Tail bound from p^(n)(x,y) ≤ sqrt(m(y)/m(x)) ρ^n.
    double rigorous_bound = 0.0;
};

/// Partial sum Σ_{n≤N} p^(n)(x,y) λ^{-n-1}. Needs |λ| > rho_hi.
SeriesValue green_series(const TruncatedBall& ball, const VertexPath& y,
                         std::complex<double> lambda, int N, double rho_hi);
/// Partial sum Σ_{n≤N} f^(n)(x,y) λ^{-n}. Needs |λ| > rho_hi.
SeriesValue first_passage_series(const TruncatedBall& ball, const VertexPath& y,
                                 std::complex<double> lambda, int N, double rho_hi);

} // namespace martinkern
