#include "martinkern/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "martinkern/errors.hpp"

namespace martinkern {

namespace {

[[noreturn]] void parse_error(const std::string& what) {
    throw Error(ErrorCode::Parse, what);
}

const json& member(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        parse_error(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

double number(const json& j, const char* what) {
    if (!j.is_number()) {
        parse_error(std::string(what) + " must be a number");
    }
    return j.get<double>();
}

void write_number(std::ostringstream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    const std::string text = buf;
    out << text;
    // keep doubles recognisable as floats
    if (std::isfinite(v) && text.find_first_of(".e") == std::string::npos) {
        out << ".0";
    }
}

void write(std::ostringstream& out, const json& j, int indent, int level) {
    const auto newline = [&](int lvl) {
        if (indent > 0) {
            out << '\n' << std::string(static_cast<size_t>(indent * lvl), ' ');
        }
    };
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out << "{}";
            return;
        }
        out << '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out << ',';
            first = false;
            newline(level + 1);
            out << json(it.key()).dump() << (indent > 0 ? ": " : ":");
            write(out, it.value(), indent, level + 1);
        }
        newline(level);
        out << '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out << "[]";
            return;
        }
        // arrays of scalars stay on one line
        bool flat = true;
        for (const auto& e : j) {
            if (e.is_structured() && !e.empty()) flat = false;
        }
        out << '[';
        bool first = true;
        for (const auto& e : j) {
            if (!first) out << (flat && indent > 0 ? ", " : ",");
            first = false;
            if (!flat) newline(level + 1);
            write(out, e, indent, level + 1);
        }
        if (!flat) newline(level);
        out << ']';
        return;
    }
    case json::value_t::number_float:
        write_number(out, j.get<double>());
        return;
    default:
        out << j.dump();
    }
}

} // namespace

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        parse_error("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        parse_error(path + ": " + e.what());
    }
}

Complex parse_complex(const json& j) {
    if (j.is_number()) {
        return j.get<double>();
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    parse_error("complex value must be a number or [re, im], got " + j.dump());
}

json complex_to_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

VertexPath parse_vertex(const json& j) {
    if (!j.is_array()) {
        parse_error("vertex must be an array of slot indices, got " + j.dump());
    }
    std::vector<int> slots;
    for (const auto& e : j) {
        if (!e.is_number_integer() || e.get<long long>() < 0) {
            parse_error("vertex slots must be non-negative integers, got " + j.dump());
        }
        slots.push_back(e.get<int>());
    }
    return VertexPath(std::move(slots));
}

VertexPath parse_vertex(const std::string& text) {
    try {
        return parse_vertex(json::parse(text));
    } catch (const json::exception&) {
        parse_error("cannot parse vertex '" + text + "'");
    }
}

json vertex_to_json(const VertexPath& x) {
    return json(x.slots());
}

TreeSpec parse_tree_spec(const json& j) {
    const json& root = member(j, "root_type");
    const json& types = member(j, "types");
    if (!root.is_string() || !types.is_object() || types.empty()) {
        parse_error("spec needs a string 'root_type' and a non-empty 'types' object");
    }
    std::map<std::string, int> index;
    for (auto it = types.begin(); it != types.end(); ++it) {
        index.emplace(it.key(), static_cast<int>(index.size()));
    }
    const auto type_of = [&](const json& name) {
        if (!name.is_string() || !index.contains(name.get<std::string>())) {
            parse_error("unknown type " + name.dump());
        }
        return index.at(name.get<std::string>());
    };
    std::vector<TypeRecord> records;
    for (auto it = types.begin(); it != types.end(); ++it) {
        TypeRecord rec;
        rec.name = it.key();
        rec.up_prob = it.value().contains("up_prob") ? number(it.value()["up_prob"], "up_prob") : 0.0;
        const json& slots = member(it.value(), "slots");
        if (!slots.is_array()) {
            parse_error("'slots' of type " + rec.name + " must be an array");
        }
        for (const auto& s : slots) {
            rec.slots.push_back({type_of(member(s, "child_type")), number(member(s, "down_prob"), "down_prob")});
        }
        records.push_back(std::move(rec));
    }
    return TreeSpec(std::move(records), type_of(root));
}

json tree_spec_to_json(const TreeSpec& spec) {
    json types = json::object();
    for (const auto& rec : spec.types()) {
        json slots = json::array();
        for (const auto& s : rec.slots) {
            slots.push_back({{"child_type", spec.type(s.child_type).name}, {"down_prob", s.down_prob}});
        }
        types[rec.name] = {{"up_prob", rec.up_prob}, {"slots", slots}};
    }
    return {{"root_type", spec.type(spec.root_type()).name}, {"types", types}};
}

namespace {

std::vector<VertexPath> parse_carrier(const json& j) {
    const json& carrier = member(j, "carrier");
    if (!carrier.is_array()) {
        parse_error("'carrier' must be an array of vertices");
    }
    std::vector<VertexPath> out;
    for (const auto& v : carrier) {
        out.push_back(parse_vertex(v));
    }
    return out;
}

std::map<VertexPath, Complex> zip_values(const std::vector<VertexPath>& carrier, const json& values) {
    if (!values.is_array() || values.size() != carrier.size()) {
        parse_error("'values' must have one entry per carrier vertex");
    }
    std::map<VertexPath, Complex> out;
    for (size_t i = 0; i < carrier.size(); ++i) {
        if (!out.emplace(carrier[i], parse_complex(values[i])).second) {
            parse_error("duplicate carrier vertex " + carrier[i].to_string());
        }
    }
    return out;
}

json carrier_json(const std::set<VertexPath>& carrier) {
    json out = json::array();
    for (const auto& x : carrier) {
        out.push_back(vertex_to_json(x));
    }
    return out;
}

} // namespace

BoundaryDistribution parse_distribution(const TreeSpec& spec, const json& j) {
    if (j.contains("refinement") && j["refinement"] != "uniform") {
        parse_error("only uniform refinement is supported");
    }
    const auto carrier = parse_carrier(j);
    return BoundaryDistribution::from_values(spec, zip_values(carrier, member(j, "values")));
}

json distribution_to_json(const BoundaryDistribution& nu) {
    json carrier = json::array();
    json values = json::array();
    for (const auto& [x, v] : nu.values()) {
        carrier.push_back(vertex_to_json(x));
        values.push_back(complex_to_json(v));
    }
    return {{"carrier", carrier}, {"values", values}, {"refinement", "uniform"}};
}

PolyFile parse_poly(const json& j, const TreeSpec* spec) {
    PolyFile out;
    if (j.contains("spec")) {
        out.spec = parse_tree_spec(j["spec"]);
        spec = &*out.spec;
    }
    if (spec == nullptr) {
        parse_error("representation needs a spec (embedded or supplied)");
    }
    require_valid(*spec);
    out.rep.lambda = parse_complex(member(j, "lambda"));
    const json& order = member(j, "order");
    if (!order.is_number_integer() || order.get<int>() < 1) {
        parse_error("'order' must be a positive integer");
    }
    const int n = order.get<int>();
    const auto carrier = parse_carrier(j);
    const json& values = member(j, "values");
    if (!values.is_array() || static_cast<int>(values.size()) != n) {
        parse_error("'values' must hold one array per order");
    }
    for (int r = 0; r < n; ++r) {
        out.rep.distributions.push_back(
            BoundaryDistribution::from_values(*spec, zip_values(carrier, values[static_cast<size_t>(r)])));
    }
    return out;
}

json poly_to_json(const TreeSpec& spec, const PolyRepresentation& rep) {
    // every order is written on the union carrier, refined where needed
    std::set<VertexPath> carrier;
    for (const auto& nu : rep.distributions) {
        for (const auto& [x, _] : nu.values()) carrier.insert(x);
    }
    json values = json::array();
    for (const auto& nu : rep.distributions) {
        json row = json::array();
        for (const auto& x : carrier) {
            row.push_back(complex_to_json(arc_value(spec, nu, x)));
        }
        values.push_back(row);
    }
    return {{"lambda", complex_to_json(rep.lambda)},
            {"order", rep.order()},
            {"carrier", carrier_json(carrier)},
            {"values", values}};
}

EdgeTypeModel parse_edge_model(const json& j) {
    const json& types = member(j, "types");
    if (!types.is_array() || types.empty()) {
        parse_error("'types' must be a non-empty array");
    }
    std::map<std::string, int> index;
    for (const auto& t : types) {
        const json& name = member(t, "name");
        if (!name.is_string() || !index.emplace(name.get<std::string>(), static_cast<int>(index.size())).second) {
            parse_error("edge type names must be distinct strings");
        }
    }
    EdgeTypeModel model;
    for (const auto& t : types) {
        EdgeType e;
        e.name = t["name"].get<std::string>();
        const json& inv = member(t, "inverse");
        if (!inv.is_string() || !index.contains(inv.get<std::string>())) {
            parse_error("unknown inverse " + inv.dump() + " for edge type " + e.name);
        }
        e.inverse = index.at(inv.get<std::string>());
        const json& degree = member(t, "degree");
        if (!degree.is_number_integer()) {
            parse_error("'degree' must be an integer");
        }
        e.degree = degree.get<int>();
        e.prob = number(member(t, "prob"), "prob");
        model.types.push_back(std::move(e));
    }
    return model;
}

std::map<VertexPath, Complex> parse_vertex_table(const json& j) {
    const json& vertices = member(j, "vertices");
    if (!vertices.is_array()) {
        parse_error("'vertices' must be an array");
    }
    std::vector<VertexPath> keys;
    for (const auto& v : vertices) keys.push_back(parse_vertex(v));
    return zip_values(keys, member(j, "values"));
}

json vertex_table_to_json(const std::map<VertexPath, Complex>& values) {
    json vertices = json::array();
    json vals = json::array();
    for (const auto& [x, v] : values) {
        vertices.push_back(vertex_to_json(x));
        vals.push_back(complex_to_json(v));
    }
    return {{"vertices", vertices}, {"values", vals}};
}

std::string dump_json(const json& j, int indent) {
    std::ostringstream out;
    write(out, j, indent, 0);
    return out.str();
}

} // namespace martinkern
