#include "martinkern/tree_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "martinkern/errors.hpp"

namespace martinkern {

namespace {

constexpr double kStochasticTol = 1e-12;

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

VertexPath VertexPath::parent() const {
    if (slots_.empty()) {
        throw Error(ErrorCode::InvalidPath, "the root has no parent");
    }
    return VertexPath(std::vector<int>(slots_.begin(), slots_.end() - 1));
}

VertexPath VertexPath::child(int slot) const {
    auto s = slots_;
    s.push_back(slot);
    return VertexPath(std::move(s));
}

VertexPath VertexPath::prefix(int length) const {
    length = std::clamp(length, 0, depth());
    return VertexPath(std::vector<int>(slots_.begin(), slots_.begin() + length));
}

bool VertexPath::is_prefix_of(const VertexPath& other) const noexcept {
    if (depth() > other.depth()) {
        return false;
    }
    return std::equal(slots_.begin(), slots_.end(), other.slots_.begin());
}

std::string VertexPath::to_string() const {
    std::string s = "[";
    for (size_t i = 0; i < slots_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(slots_[i]);
    }
    return s + "]";
}

VertexPath confluent(const VertexPath& x, const VertexPath& y) {
    int k = 0;
    const int n = std::min(x.depth(), y.depth());
    while (k < n && x[k] == y[k]) {
        ++k;
    }
    return x.prefix(k);
}

int distance(const VertexPath& x, const VertexPath& y) {
    return x.depth() + y.depth() - 2 * confluent(x, y).depth();
}

std::vector<VertexPath> geodesic(const VertexPath& x, const VertexPath& y) {
    const int c = confluent(x, y).depth();
    std::vector<VertexPath> path;
    for (int d = x.depth(); d >= c; --d) {
        path.push_back(x.prefix(d));
    }
    for (int d = c + 1; d <= y.depth(); ++d) {
        path.push_back(y.prefix(d));
    }
    return path;
}

TreeSpec::TreeSpec(std::vector<TypeRecord> types, int root_type)
    : types_(std::move(types)), root_type_(root_type) {
    const int n = type_count();
    if (root_type_ < 0 || root_type_ >= n) {
        throw Error(ErrorCode::InvalidSpec, "root type index out of range");
    }
    for (const auto& t : types_) {
        for (const auto& s : t.slots) {
            if (s.child_type < 0 || s.child_type >= n) {
                throw Error(ErrorCode::InvalidSpec,
                            "type '" + t.name + "' has a slot with an unknown child type");
            }
        }
    }
}

int TreeSpec::type_index(const std::string& name) const {
    for (int t = 0; t < type_count(); ++t) {
        if (types_[static_cast<size_t>(t)].name == name) {
            return t;
        }
    }
    throw Error(ErrorCode::InvalidSpec, "unknown type '" + name + "'");
}

int TreeSpec::type_at(const VertexPath& x) const {
    int t = root_type_;
    for (int s : x.slots()) {
        const auto& rec = type(t);
        if (s < 0 || s >= static_cast<int>(rec.slots.size())) {
            throw Error(ErrorCode::InvalidPath,
                        "slot " + std::to_string(s) + " invalid in " + x.to_string());
        }
        t = rec.slots[static_cast<size_t>(s)].child_type;
    }
    return t;
}

std::vector<int> TreeSpec::types_along(const VertexPath& x) const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(x.depth()) + 1);
    int t = root_type_;
    out.push_back(t);
    for (int s : x.slots()) {
        const auto& rec = type(t);
        if (s < 0 || s >= static_cast<int>(rec.slots.size())) {
            throw Error(ErrorCode::InvalidPath,
                        "slot " + std::to_string(s) + " invalid in " + x.to_string());
        }
        t = rec.slots[static_cast<size_t>(s)].child_type;
        out.push_back(t);
    }
    return out;
}

bool TreeSpec::contains(const VertexPath& x) const noexcept {
    int t = root_type_;
    for (int s : x.slots()) {
        const auto& rec = types_[static_cast<size_t>(t)];
        if (s < 0 || s >= static_cast<int>(rec.slots.size())) {
            return false;
        }
        t = rec.slots[static_cast<size_t>(s)].child_type;
    }
    return true;
}

double TreeSpec::transition(const VertexPath& x, const VertexPath& y) const {
    if (y.depth() == x.depth() + 1 && x.is_prefix_of(y)) {
        const auto& rec = type(type_at(x));
        return rec.slots.at(static_cast<size_t>(y.back())).down_prob;
    }
    if (x.depth() == y.depth() + 1 && y.is_prefix_of(x)) {
        return type(type_at(x)).up_prob;
    }
    return 0.0;
}

std::vector<std::pair<VertexPath, double>> TreeSpec::neighbours(const VertexPath& x) const {
    const auto& rec = type(type_at(x));
    std::vector<std::pair<VertexPath, double>> out;
    out.reserve(rec.slots.size() + 1);
    if (!x.is_root()) {
        out.emplace_back(x.parent(), rec.up_prob);
    }
    for (size_t s = 0; s < rec.slots.size(); ++s) {
        out.emplace_back(x.child(static_cast<int>(s)), rec.slots[s].down_prob);
    }
    return out;
}

std::vector<VertexPath> TreeSpec::ball(int radius) const {
    std::vector<VertexPath> out{VertexPath{}};
    size_t begin = 0;
    for (int d = 0; d < radius; ++d) {
        const size_t end = out.size();
        for (size_t i = begin; i < end; ++i) {
            const int n = child_count(type_at(out[i]));
            for (int s = 0; s < n; ++s) {
                out.push_back(out[i].child(s));
            }
        }
        begin = end;
    }
    return out;
}

std::vector<std::string> validate(const TreeSpec& spec) {
    std::vector<std::string> issues;
    const int root = spec.root_type();
    for (int t = 0; t < spec.type_count(); ++t) {
        const auto& rec = spec.type(t);
        double row = 0.0;
        for (size_t s = 0; s < rec.slots.size(); ++s) {
            const auto& slot = rec.slots[s];
            if (slot.child_type == root) {
                issues.push_back("root type '" + spec.type(root).name +
                                 "' appears as child of '" + rec.name + "' slot " +
                                 std::to_string(s));
            }
            if (!(slot.down_prob > 0.0) || slot.down_prob > 1.0) {
                issues.push_back("type '" + rec.name + "' slot " + std::to_string(s) +
                                 " has down_prob " + fmt_double(slot.down_prob) +
                                 " outside (0,1]");
            }
            row += slot.down_prob;
        }
        if (rec.slots.empty()) {
            issues.push_back("type '" + rec.name + "' has no slots (leaves are not allowed)");
        }
        if (t == root) {
            if (rec.up_prob != 0.0) {
                issues.push_back("root type '" + rec.name + "' has non-zero up_prob");
            }
            if (std::abs(row - 1.0) > kStochasticTol) {
                issues.push_back("root row sum != 1 (got " + fmt_double(row) + ")");
            }
        } else {
            if (!(rec.up_prob > 0.0) || rec.up_prob >= 1.0) {
                issues.push_back("type '" + rec.name + "' has up_prob " +
                                 fmt_double(rec.up_prob) + " outside (0,1)");
            }
            if (std::abs(rec.up_prob + row - 1.0) > kStochasticTol) {
                issues.push_back("type '" + rec.name + "' row sum != 1 (got " +
                                 fmt_double(rec.up_prob + row) + ")");
            }
        }
    }
    return issues;
}

void require_valid(const TreeSpec& spec) {
    const auto issues = validate(spec);
    if (!issues.empty()) {
        std::string msg;
        for (const auto& s : issues) {
            msg += (msg.empty() ? "" : "; ") + s;
        }
        throw Error(ErrorCode::InvalidSpec, msg);
    }
}

double reversing_measure(const TreeSpec& spec, const VertexPath& x) {
    const auto types = spec.types_along(x);
    double m = 1.0;
    for (int i = 0; i < x.depth(); ++i) {
        const auto& parent = spec.type(types[static_cast<size_t>(i)]);
        const auto& child = spec.type(types[static_cast<size_t>(i) + 1]);
        m *= parent.slots[static_cast<size_t>(x[i])].down_prob / child.up_prob;
    }
    return m;
}

std::complex<double> apply_P(const TreeSpec& spec, const VertexFn& f, const VertexPath& x) {
    std::complex<double> acc{};
    for (const auto& [y, p] : spec.neighbours(x)) {
        acc += p * f(y);
    }
    return acc;
}

int EdgeTypeModel::total_degree() const {
    int d = 0;
    for (const auto& j : types) {
        d += j.degree;
    }
    return d;
}

std::vector<std::string> validate(const EdgeTypeModel& model) {
    std::vector<std::string> issues;
    const int n = static_cast<int>(model.types.size());
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        const auto& e = model.types[static_cast<size_t>(j)];
        if (e.inverse < 0 || e.inverse >= n) {
            issues.push_back("edge type '" + e.name + "' has an out-of-range inverse");
            continue;
        }
        if (model.types[static_cast<size_t>(e.inverse)].inverse != j) {
            issues.push_back("inverse of edge type '" + e.name + "' is not an involution");
        }
        if (e.degree < 1) {
            issues.push_back("edge type '" + e.name + "' has degree < 1");
        }
        if (!(e.prob > 0.0)) {
            issues.push_back("edge type '" + e.name + "' has non-positive probability");
        }
        total += e.degree * e.prob;
    }
    if (std::abs(total - 1.0) > kStochasticTol) {
        issues.push_back("sum of d_j p_j != 1 (got " + fmt_double(total) + ")");
    }
    if (model.total_degree() < 3) {
        issues.push_back("vertex degree " + std::to_string(model.total_degree()) + " < 3");
    }
    return issues;
}

TreeSpec edge_model_to_spec(const EdgeTypeModel& model) {
    const auto issues = validate(model);
    if (!issues.empty()) {
        throw Error(ErrorCode::InvalidSpec, issues.front());
    }
    const int n = static_cast<int>(model.types.size());
    // index 0 is the root, 1 + j is "entered via j"
    std::vector<TypeRecord> types(static_cast<size_t>(n) + 1);
    types[0].name = "root";
    for (int j = 0; j < n; ++j) {
        const auto& e = model.types[static_cast<size_t>(j)];
        for (int c = 0; c < e.degree; ++c) {
            types[0].slots.push_back({1 + j, e.prob});
        }
    }
    for (int j = 0; j < n; ++j) {
        const auto& e = model.types[static_cast<size_t>(j)];
        auto& rec = types[static_cast<size_t>(j) + 1];
        rec.name = "via:" + e.name;
        rec.up_prob = model.types[static_cast<size_t>(e.inverse)].prob;
        for (int k = 0; k < n; ++k) {
            const auto& ek = model.types[static_cast<size_t>(k)];
            const int copies = ek.degree - (k == e.inverse ? 1 : 0);
            for (int c = 0; c < copies; ++c) {
                rec.slots.push_back({1 + k, ek.prob});
            }
        }
    }
    return TreeSpec(std::move(types), 0);
}

TreeSpec homogeneous_tree_spec(int q) {
    if (q < 1) {
        throw Error(ErrorCode::InvalidSpec, "homogeneous tree needs q >= 1");
    }
    const double p = 1.0 / (q + 1);
    TypeRecord root{"root", 0.0, std::vector<SlotRecord>(static_cast<size_t>(q) + 1, {1, p})};
    TypeRecord a{"A", p, std::vector<SlotRecord>(static_cast<size_t>(q), {1, p})};
    return TreeSpec({root, a}, 0);
}

} // namespace martinkern
