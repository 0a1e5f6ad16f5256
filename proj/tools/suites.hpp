#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "martinkern/boundary.hpp"
#include "martinkern/tree_model.hpp"

namespace martinkern::cli {

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// residual <= tolerance; NaN fails.
Check residual_check(std::string name, double value, double tolerance);
/// value > threshold.
Check above_check(std::string name, double value, double threshold);

std::vector<Check> eigen_suite(const TreeSpec& spec, Complex lambda, std::uint64_t seed);
std::vector<Check> oracle_suite(const TreeSpec& spec, Complex lambda, std::uint64_t seed);
std::vector<Check> roundtrip_suite(const TreeSpec& spec, Complex lambda,
                                   const std::optional<BoundaryDistribution>& nu, std::uint64_t seed);
std::vector<Check> poly_suite(const TreeSpec& spec, Complex lambda, std::uint64_t seed);
std::vector<Check> isotropic_suite(int q, Complex lambda, std::uint64_t seed);
std::vector<Check> forward_suite(const TreeSpec& spec, Complex lambda, std::uint64_t seed);
std::vector<Check> group_suite(const EdgeTypeModel& model, Complex lambda);

} // namespace martinkern::cli
