#pragma once

#include <compare>
#include <complex>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace martinkern {

/// Address of a vertex as the child slots taken from the root. The empty
/// path is the root; a path also names the boundary arc below that vertex.
class VertexPath {
public:
    VertexPath() = default;
    explicit VertexPath(std::vector<int> slots) : slots_(std::move(slots)) {}
    VertexPath(std::initializer_list<int> slots) : slots_(slots) {}

    int depth() const noexcept { return static_cast<int>(slots_.size()); }
    bool is_root() const noexcept { return slots_.empty(); }
    std::span<const int> slots() const noexcept { return slots_; }
    int operator[](int i) const { return slots_[static_cast<size_t>(i)]; }
    int back() const { return slots_.back(); }

    VertexPath parent() const;
    VertexPath child(int slot) const;
    VertexPath prefix(int length) const;

    /// True when this vertex lies on the geodesic from the root to `other`
    /// (ancestor or equal).
    bool is_prefix_of(const VertexPath& other) const noexcept;
    bool is_strict_ancestor_of(const VertexPath& other) const noexcept {
        return depth() < other.depth() && is_prefix_of(other);
    }

    std::string to_string() const;

    auto operator<=>(const VertexPath&) const = default;
    bool operator==(const VertexPath&) const = default;

private:
    std::vector<int> slots_;
};

VertexPath confluent(const VertexPath& x, const VertexPath& y);
int distance(const VertexPath& x, const VertexPath& y);
std::vector<VertexPath> geodesic(const VertexPath& x, const VertexPath& y);

struct SlotRecord {
    int child_type = 0;
    double down_prob = 0.0;
};

struct TypeRecord {
    std::string name;
    double up_prob = 0.0;
    std::vector<SlotRecord> slots;
};

/**
 * Finite cone-type automaton describing a rooted, locally finite tree with
 * nearest-neighbour transition probabilities. A vertex of non-root type t
 * steps to its parent with probability up_prob(t) and to child slot s with
 * probability slots[s].down_prob.
 *
 * Construction only checks referential integrity; stochasticity and the
 * remaining invariants are reported by validate().
 */
class TreeSpec {
public:
    TreeSpec() = default;
    TreeSpec(std::vector<TypeRecord> types, int root_type);

    int root_type() const noexcept { return root_type_; }
    int type_count() const noexcept { return static_cast<int>(types_.size()); }
    const TypeRecord& type(int t) const { return types_.at(static_cast<size_t>(t)); }
    std::span<const TypeRecord> types() const noexcept { return types_; }
    int type_index(const std::string& name) const;

    /// Type of the vertex at `x`; throws InvalidPath for invalid slots.
    int type_at(const VertexPath& x) const;
    /// Types of o, x_1, ..., x along the geodesic from the root.
    std::vector<int> types_along(const VertexPath& x) const;
    bool contains(const VertexPath& x) const noexcept;

    int child_count(int t) const { return static_cast<int>(type(t).slots.size()); }
    /// p(x, y) for neighbours x, y; 0 when they are not adjacent.
    double transition(const VertexPath& x, const VertexPath& y) const;
    /// Neighbours of x paired with p(x, y); parent first (if any), then children.
    std::vector<std::pair<VertexPath, double>> neighbours(const VertexPath& x) const;

    /// All vertices of depth at most `radius`, parents before children.
    std::vector<VertexPath> ball(int radius) const;

private:
    std::vector<TypeRecord> types_;
    int root_type_ = 0;
};

/// List of human-readable violations; empty iff the spec is a valid
/// bidirectional cone-type walk.
std::vector<std::string> validate(const TreeSpec& spec);
/// Throws InvalidSpec listing the violations.
void require_valid(const TreeSpec& spec);

/// m(x) with m(o) = 1 and m(x)p(x,y) = m(y)p(y,x).
double reversing_measure(const TreeSpec& spec, const VertexPath& x);

using VertexFn = std::function<std::complex<double>(const VertexPath&)>;

/// (P f)(x) = Σ_y p(x,y) f(y).
std::complex<double> apply_P(const TreeSpec& spec, const VertexFn& f, const VertexPath& x);

/// Oriented edge type j with its reverse, multiplicity at every vertex and
/// transition probability.
struct EdgeType {
    std::string name;
    int inverse = 0;
    int degree = 1;
    double prob = 0.0;
};

struct EdgeTypeModel {
    std::vector<EdgeType> types;

    int total_degree() const;
};

std::vector<std::string> validate(const EdgeTypeModel& model);

/// Cone-type description of the transitive edge-typed tree. Type "root" is
/// the root; type "via:<j>" is a vertex entered along an edge of type j.
TreeSpec edge_model_to_spec(const EdgeTypeModel& model);

/// Simple random walk on the homogeneous tree of degree q+1.
TreeSpec homogeneous_tree_spec(int q);

} // namespace martinkern
