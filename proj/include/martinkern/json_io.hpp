#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "martinkern/boundary.hpp"
#include "martinkern/polyharmonic.hpp"
#include "martinkern/tree_model.hpp"

namespace martinkern {

using nlohmann::json;

/// Reads and parses a JSON file; Parse error on I/O or syntax failure.
json read_json_file(const std::string& path);

/// Complex from a number or a [re, im] pair.
Complex parse_complex(const json& j);
json complex_to_json(Complex z);

/// Vertex from a JSON array of slot indices or the text "[0,1]".
VertexPath parse_vertex(const json& j);
VertexPath parse_vertex(const std::string& text);
json vertex_to_json(const VertexPath& x);

/// {"root_type", "types": {name: {"up_prob", "slots": [{"child_type", "down_prob"}]}}}.
/// Types are indexed in name order. Shape errors throw Parse; the walk
/// itself is not validated here.
TreeSpec parse_tree_spec(const json& j);
json tree_spec_to_json(const TreeSpec& spec);

/// {"carrier": [[...], ...], "values": [[re, im], ...]}.
BoundaryDistribution parse_distribution(const TreeSpec& spec, const json& j);
json distribution_to_json(const BoundaryDistribution& nu);

/// {"lambda", "order", "carrier", "values": [[v_0 per vertex], ..., [v_{n−1} ...]]},
/// optionally with an embedded "spec".
struct PolyFile {
    PolyRepresentation rep;
    std::optional<TreeSpec> spec;
};
PolyFile parse_poly(const json& j, const TreeSpec* spec = nullptr);
json poly_to_json(const TreeSpec& spec, const PolyRepresentation& rep);

/// {"types": [{"name", "inverse", "degree", "prob"}]}; "inverse" is a type name.
EdgeTypeModel parse_edge_model(const json& j);

/// {"vertices": [[...], ...], "values": [[re, im], ...]}.
std::map<VertexPath, Complex> parse_vertex_table(const json& j);
json vertex_table_to_json(const std::map<VertexPath, Complex>& values);

/// Serializes with every double printed as %.17g; object keys keep
/// nlohmann's sorted order, so equal values give identical bytes.
std::string dump_json(const json& j, int indent = 2);

} // namespace martinkern
