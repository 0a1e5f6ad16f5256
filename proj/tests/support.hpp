#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "martinkern/boundary.hpp"
#include "martinkern/tree_model.hpp"

namespace testing {

using martinkern::BoundaryDistribution;
using martinkern::Complex;
using martinkern::SlotRecord;
using martinkern::TreeSpec;
using martinkern::TypeRecord;
using martinkern::VertexPath;

inline TreeSpec t2() { return martinkern::homogeneous_tree_spec(2); }

// root: 3 x A at 1/3; A: up 1/2, 2 x A at 1/4
inline TreeSpec biased_tree() {
    return TreeSpec({{"o", 0.0, {{1, 1.0 / 3}, {1, 1.0 / 3}, {1, 1.0 / 3}}},
                     {"A", 0.5, {{1, 0.25}, {1, 0.25}}}},
                    0);
}

// A-vertices may have B-children, B-vertices only B-children
inline TreeSpec two_type_tree() {
    return TreeSpec({{"o", 0.0, {{1, 0.5}, {2, 0.5}}},
                     {"A", 0.3, {{1, 0.3}, {2, 0.4}}},
                     {"B", 0.5, {{2, 0.5}}}},
                    0);
}

inline TreeSpec mixed_tree() {
    return TreeSpec({{"o", 0.0, {{1, 0.4}, {2, 0.3}, {2, 0.3}}},
                     {"A", 0.4, {{2, 0.35}, {2, 0.25}}},
                     {"B", 0.2, {{1, 0.3}, {1, 0.3}, {1, 0.2}}}},
                    0);
}

inline std::vector<TreeSpec> walk_specs() {
    return {t2(), biased_tree(), two_type_tree(), mixed_tree()};
}

inline TreeSpec binary_forward() {
    return TreeSpec({{"B", 0.0, {{0, 0.5}, {0, 0.5}}}}, 0);
}

// uneven forward weights; the root type reappears below
inline TreeSpec skewed_forward() {
    return TreeSpec({{"R", 0.0, {{1, 0.3}, {2, 0.7}}},
                     {"C", 0.0, {{1, 0.6}, {2, 0.4}}},
                     {"D", 0.0, {{1, 0.2}, {2, 0.5}, {0, 0.3}}}},
                    0);
}

inline bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

inline double max_arc_diff(const TreeSpec& spec, const BoundaryDistribution& a,
                           const BoundaryDistribution& b) {
    double worst = 0.0;
    for (const auto& [x, v] : a.values()) worst = std::max(worst, std::abs(v - arc_value(spec, b, x)));
    for (const auto& [x, v] : b.values()) worst = std::max(worst, std::abs(v - arc_value(spec, a, x)));
    return worst;
}

} // namespace testing
