// Command-line front end. Exit codes: 0 success, 1 verify failure, 2 bad
// input, 3 non-convergence, 4 singular parameter.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "martinkern/boundary.hpp"
#include "martinkern/errors.hpp"
#include "martinkern/forward.hpp"
#include "martinkern/green_kernel.hpp"
#include "martinkern/isotropic.hpp"
#include "martinkern/json_io.hpp"
#include "martinkern/polyharmonic.hpp"
#include "martinkern/series_oracle.hpp"
#include "suites.hpp"

using namespace martinkern;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kBadInput = 2, kNonConvergence = 3, kSingular = 4 };

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonConvergence:
        return kNonConvergence;
    case ErrorCode::SingularJet:
    case ErrorCode::ZeroDenominator:
    case ErrorCode::VanishingGreen:
    case ErrorCode::DenominatorNearOne:
    case ErrorCode::BranchCut:
    case ErrorCode::ZeroLambda:
        return kSingular;
    default:
        return kBadInput;
    }
}

struct Options {
    std::string spec;
    std::string lambda = "1.0";
    int order = 4;
    double tolerance = 1e-13;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string output;

    std::string dist;
    std::string x = "[]";
    std::string arc;
    std::string at;
    int radius = -1;
    std::string h = "ones";
    int depth = 3;
    std::string synth;
    std::string decompose;
    int n = 1;
    int q = 2;
    int N = 40;
    std::string y = "[]";
    std::string suite;
    std::string model;
};

Complex parse_lambda(const std::string& text) {
    std::istringstream in(text);
    double re = 0.0;
    double im = 0.0;
    char sep = 0;
    if (!(in >> re)) {
        throw Error(ErrorCode::Parse, "cannot parse lambda '" + text + "'; use re or re,im");
    }
    if (in >> sep) {
        if (sep != ',' || !(in >> im)) {
            throw Error(ErrorCode::Parse, "cannot parse lambda '" + text + "'; use re or re,im");
        }
        std::string rest;
        if (in >> rest) {
            throw Error(ErrorCode::Parse, "trailing text in lambda '" + text + "'");
        }
    }
    return {re, im};
}

json derivatives(const Jet& j) {
    json out = json::array();
    for (int r = 0; r <= j.order(); ++r) {
        out.push_back(complex_to_json(j.derivative(r)));
    }
    return out;
}

// --spec file, else a "spec" embedded in the fallback document
TreeSpec load_spec(const Options& o, const json* fallback = nullptr) {
    if (!o.spec.empty()) {
        return parse_tree_spec(read_json_file(o.spec));
    }
    if (fallback != nullptr && fallback->contains("spec")) {
        return parse_tree_spec((*fallback)["spec"]);
    }
    throw Error(ErrorCode::Parse, "no tree spec given; use --spec");
}

void emit(const Options& o, const std::string& text) {
    if (o.output.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(o.output);
    if (!out) {
        throw Error(ErrorCode::Parse, "cannot write " + o.output);
    }
    out << text << '\n';
}

void emit_json(const Options& o, const json& j) {
    emit(o, dump_json(j));
}

// one row per vertex: path, re, im
void emit_table(const Options& o, const std::map<VertexPath, Complex>& values, const char* what) {
    if (o.format == "csv") {
        std::ostringstream out;
        out << "vertex,re,im\n";
        for (const auto& [x, v] : values) {
            out << '"' << x.to_string() << '"' << ',' << dump_json(json(v.real())) << ','
                << dump_json(json(v.imag())) << '\n';
        }
        std::string text = out.str();
        text.pop_back();
        emit(o, text);
        return;
    }
    emit_json(o, {{what, vertex_table_to_json(values)}});
}

JetTable solve(const TreeSpec& spec, const Options& o, int order) {
    SolverOptions opts;
    opts.tolerance = o.tolerance;
    return solve_F_up(spec, parse_lambda(o.lambda), order, opts);
}

int cmd_green(const Options& o) {
    const TreeSpec spec = load_spec(o);
    require_valid(spec);
    const JetTable table = solve(spec, o, o.order);
    json f_up = json::object();
    for (int t = 0; t < spec.type_count(); ++t) {
        if (t == spec.root_type()) continue;
        f_up[spec.type(t).name] = derivatives(table.f_up(t));
    }
    const Jet G = green_diag(table, VertexPath{});
    const RhoBracket rho = estimate_rho(spec);
    emit_json(o, {{"lambda", complex_to_json(table.lambda())},
                  {"order", table.order()},
                  {"F_up", f_up},
                  {"G", complex_to_json(G.value())},
                  {"G_derivatives", derivatives(G)},
                  {"iterations", table.iterations()},
                  {"residual", table.residual()},
                  {"rho",
                   {{"lo", rho.lo},
                    {"hi", rho.hi},
                    {"series_lo", rho.series_lo},
                    {"divergence_lo", rho.divergence_lo},
                    {"budget_exhausted", rho.budget_exhausted}}}});
    return kOk;
}

int cmd_kernel(const Options& o) {
    const TreeSpec spec = load_spec(o);
    const JetTable table = solve(spec, o, o.order);
    const VertexPath x = parse_vertex(o.x);
    const VertexPath arc = parse_vertex(o.arc);
    if (!spec.contains(x) || !spec.contains(arc)) {
        throw Error(ErrorCode::InvalidPath, "vertex not in the tree");
    }
    emit_json(o, {{"lambda", complex_to_json(table.lambda())},
                  {"order", table.order()},
                  {"x", vertex_to_json(x)},
                  {"arc", vertex_to_json(arc)},
                  {"value", derivatives(martin_kernel(table, x, arc))}});
    return kOk;
}

int cmd_poisson(const Options& o) {
    const json doc = read_json_file(o.dist);
    const TreeSpec spec = load_spec(o, &doc);
    const BoundaryDistribution nu = parse_distribution(spec, doc);
    const JetTable table = solve(spec, o, o.order);
    if (o.radius >= 0) {
        std::map<VertexPath, Complex> values;
        for (const auto& x : spec.ball(o.radius)) {
            values[x] = poisson_transform(nu, table, x).value();
        }
        emit_table(o, values, "h");
        return kOk;
    }
    const VertexPath x = parse_vertex(o.at.empty() ? o.x : o.at);
    emit_json(o, {{"lambda", complex_to_json(table.lambda())},
                  {"order", table.order()},
                  {"x", vertex_to_json(x)},
                  {"value", derivatives(poisson_transform(nu, table, x))}});
    return kOk;
}

int cmd_recover(const Options& o) {
    const TreeSpec spec = load_spec(o);
    const Complex lambda = parse_lambda(o.lambda);
    const JetTable table = solve(spec, o, 0);
    std::map<VertexPath, Complex> values;
    if (o.h == "ones") {
        for (const auto& x : spec.ball(o.depth + 1)) values[x] = 1.0;
    } else {
        values = parse_vertex_table(read_json_file(o.h));
    }
    const auto h = HarmonicEvaluator::from_table(spec, lambda, std::move(values));
    const auto nu = recover_distribution(h, table, o.depth);
    if (o.format == "csv") {
        emit_table(o, nu.values(), "nu");
        return kOk;
    }
    json out = distribution_to_json(nu);
    out["lambda"] = complex_to_json(lambda);
    emit_json(o, out);
    return kOk;
}

int cmd_poly(const Options& o) {
    if (!o.synth.empty()) {
        const json doc = read_json_file(o.synth);
        const TreeSpec spec = load_spec(o, &doc);
        const PolyFile file = parse_poly(doc, &spec);
        SolverOptions opts;
        opts.tolerance = o.tolerance;
        const JetTable table = solve_F_up(spec, file.rep.lambda, file.rep.order() - 1, opts);
        const VertexPath x = parse_vertex(o.at.empty() ? o.x : o.at);
        emit_json(o, {{"lambda", complex_to_json(file.rep.lambda)},
                      {"order", file.rep.order()},
                      {"x", vertex_to_json(x)},
                      {"value", complex_to_json(synthesize(file.rep, table, x))}});
        return kOk;
    }
    if (!o.decompose.empty()) {
        const json doc = read_json_file(o.decompose);
        const TreeSpec spec = load_spec(o, &doc);
        const auto values = parse_vertex_table(doc);
        const JetTable table = solve(spec, o, std::max(o.n - 1, 0));
        const VertexFn f = [&](const VertexPath& x) {
            auto it = values.find(x);
            if (it == values.end()) {
                throw Error(ErrorCode::OutOfDomain, x.to_string() + " is outside the tabulated ball");
            }
            return it->second;
        };
        int radius = 0;
        for (const auto& [x, _] : values) radius = std::max(radius, x.depth());
        emit_json(o, poly_to_json(spec, decompose(table, f, radius, o.n, o.depth)));
        return kOk;
    }
    throw Error(ErrorCode::Parse, "poly needs --synth or --decompose");
}

int cmd_isotropic(const Options& o) {
    const auto params = make_isotropic(o.q, parse_lambda(o.lambda));
    const int n = o.order + 1;
    const auto coeffs = horocycle_coeffs(params, n);
    json rows = json::array();
    for (int k = 0; k < n; ++k) {
        json row = json::array();
        for (int r = 0; r < n; ++r) row.push_back(complex_to_json(coeffs.at(k, r)));
        rows.push_back(row);
    }
    json out = {{"q", o.q},
                {"rho", params.rho()},
                {"lambda", complex_to_json(params.lambda)},
                {"order", o.order},
                {"principal_branch", uses_principal_branch(params)},
                {"F", derivatives(closed_F(params, o.order))},
                {"f", complex_to_json(coeffs.f)},
                {"coeffs", rows}};
    if (!o.arc.empty()) {
        const VertexPath x = parse_vertex(o.x);
        const VertexPath arc = parse_vertex(o.arc);
        json kernel = json::array();
        for (int r = 0; r < n; ++r) kernel.push_back(complex_to_json(isotropic_kernel(params, coeffs, x, arc, r)));
        out["horocycle_index"] = horocycle_index(x, arc);
        out["kernel"] = kernel;
    }
    emit_json(o, out);
    return kOk;
}

int cmd_forward(const Options& o) {
    std::optional<json> doc;
    if (!o.dist.empty()) doc = read_json_file(o.dist);
    const TreeSpec spec = load_spec(o, doc ? &*doc : nullptr);
    require_forward(spec);
    const Complex lambda = parse_lambda(o.lambda);
    const VertexPath x = parse_vertex(o.at.empty() ? o.x : o.at);
    const int depth = std::max(o.radius, x.depth());
    const BoundaryDistribution sigma = doc ? parse_distribution(spec, *doc) : forward_measure(spec, depth);
    if (o.radius >= 0) {
        std::map<VertexPath, Complex> values;
        for (const auto& x : spec.ball(o.radius)) {
            values[x] = forward_poisson(sigma, spec, lambda, x);
        }
        emit_table(o, values, "h");
        return kOk;
    }
    emit_json(o, {{"lambda", complex_to_json(lambda)},
                  {"x", vertex_to_json(x)},
                  {"mass", forward_mass(spec, x)},
                  {"value", complex_to_json(forward_poisson(sigma, spec, lambda, x))}});
    return kOk;
}

int cmd_oracle(const Options& o) {
    const TreeSpec spec = load_spec(o);
    const Complex lambda = parse_lambda(o.lambda);
    const VertexPath x = parse_vertex(o.x);
    const VertexPath y = parse_vertex(o.y);
    const RhoBracket rho = estimate_rho(spec);
    const TruncatedBall ball(spec, x, o.N, {y});
    const auto series = green_series(ball, y, lambda, o.N, rho.hi);
    const JetTable table = solve(spec, o, 0);
    const Complex closed = green(table, x, y).value();
    emit_json(o, {{"lambda", complex_to_json(lambda)},
                  {"N", o.N},
                  {"x", vertex_to_json(x)},
                  {"y", vertex_to_json(y)},
                  {"blocks", ball.block_count()},
                  {"rho_hi", rho.hi},
                  {"series", complex_to_json(series.value)},
                  {"tail_bound", series.tail_bound},
                  {"rigorous_bound", series.rigorous_bound},
                  {"solver", complex_to_json(closed)},
                  {"difference", std::abs(series.value - closed)}});
    return kOk;
}

int cmd_verify(const Options& o) {
    const Complex lambda = parse_lambda(o.lambda);
    std::vector<cli::Check> checks;
    if (o.suite == "group") {
        checks = cli::group_suite(parse_edge_model(read_json_file(o.model)), lambda);
    } else if (o.suite == "isotropic") {
        checks = cli::isotropic_suite(o.q, lambda, o.seed);
    } else if (o.suite == "roundtrip") {
        std::optional<json> doc;
        if (!o.dist.empty()) doc = read_json_file(o.dist);
        const TreeSpec spec = load_spec(o, doc ? &*doc : nullptr);
        std::optional<BoundaryDistribution> nu;
        if (doc) nu = parse_distribution(spec, *doc);
        checks = cli::roundtrip_suite(spec, lambda, nu, o.seed);
    } else {
        const TreeSpec spec = load_spec(o);
        if (o.suite == "eigen") {
            checks = cli::eigen_suite(spec, lambda, o.seed);
        } else if (o.suite == "oracle") {
            checks = cli::oracle_suite(spec, lambda, o.seed);
        } else if (o.suite == "poly") {
            checks = cli::poly_suite(spec, lambda, o.seed);
        } else if (o.suite == "forward") {
            checks = cli::forward_suite(spec, lambda, o.seed);
        } else {
            throw Error(ErrorCode::Parse, "unknown suite '" + o.suite + "'");
        }
    }
    bool pass = true;
    json rows = json::array();
    for (const auto& c : checks) {
        pass = pass && c.pass;
        rows.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    }
    emit_json(o, {{"suite", o.suite}, {"seed", o.seed}, {"pass", pass}, {"checks", rows}});
    return pass ? kOk : kVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Green functions, Martin kernels and polyharmonic representations on cone-type trees"};
    app.require_subcommand(1);
    // -h stays free for the recover --h option
    app.set_help_flag("--help", "Print this help message and exit");
    Options o;

    auto common = [&](CLI::App* cmd, bool with_spec = true) {
        if (with_spec) cmd->add_option("--spec", o.spec, "Tree spec JSON file");
        cmd->add_option("--lambda", o.lambda, "Spectral parameter: re or re,im");
        cmd->add_option("--order", o.order, "Jet order R")->check(CLI::Range(0, 8));
        cmd->add_option("--tol", o.tolerance, "Solver tolerance")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", o.seed, "Seed for random suites");
        cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--output", o.output, "Write the report here instead of stdout");
    };

    auto* green = app.add_subcommand("green", "First-passage table, G(o,o) and a rho bracket");
    common(green);
    auto* kernel = app.add_subcommand("kernel", "Martin kernel and its lambda-derivatives");
    common(kernel);
    kernel->add_option("--x", o.x, "Vertex, e.g. [0,1]");
    kernel->add_option("--arc", o.arc, "Boundary arc vertex")->required();
    auto* poisson = app.add_subcommand("poisson", "Poisson transform of a distribution");
    common(poisson);
    poisson->add_option("--dist", o.dist, "Distribution JSON")->required();
    poisson->add_option("--at", o.at, "Vertex");
    poisson->add_option("--radius", o.radius, "Tabulate on the ball of this radius");
    auto* recover = app.add_subcommand("recover", "Boundary distribution of a lambda-harmonic table");
    common(recover);
    recover->add_option("--h", o.h, "'ones' or a vertex table JSON");
    recover->add_option("--depth", o.depth, "Carrier depth")->check(CLI::NonNegativeNumber);
    auto* poly = app.add_subcommand("poly", "Synthesize or decompose polyharmonic functions");
    common(poly);
    poly->add_option("--synth", o.synth, "Representation JSON");
    poly->add_option("--at", o.at, "Vertex");
    poly->add_option("--decompose", o.decompose, "Vertex table JSON of f");
    poly->add_option("--n", o.n, "Polyharmonic order")->check(CLI::Range(1, 9));
    poly->add_option("--depth", o.depth, "Carrier depth")->check(CLI::NonNegativeNumber);
    auto* iso = app.add_subcommand("isotropic", "Closed forms for simple random walk on T_q");
    common(iso, false);
    iso->add_option("--q", o.q, "Children per non-root vertex; the tree has degree q+1")->check(CLI::PositiveNumber);
    iso->add_option("--x", o.x, "Vertex");
    iso->add_option("--arc", o.arc, "Boundary arc vertex");
    auto* fwd = app.add_subcommand("forward", "Forward-only operator transforms");
    common(fwd);
    fwd->add_option("--dist", o.dist, "Distribution JSON; default the walk's boundary measure");
    fwd->add_option("--at", o.at, "Vertex");
    fwd->add_option("--radius", o.radius, "Tabulate on the ball of this radius");
    auto* oracle = app.add_subcommand("oracle", "Power-series Green function on a truncated ball");
    common(oracle);
    oracle->add_option("--N", o.N, "Series length and ball radius")->check(CLI::NonNegativeNumber);
    oracle->add_option("--x", o.x, "Start vertex");
    oracle->add_option("--y", o.y, "Target vertex");
    auto* verify = app.add_subcommand("verify", "Run an invariant suite");
    common(verify);
    verify->add_option("--suite", o.suite, "eigen, oracle, roundtrip, poly, isotropic, forward or group")
        ->required();
    verify->add_option("--dist", o.dist, "Distribution JSON for roundtrip");
    verify->add_option("--model", o.model, "Edge-type model JSON for group");
    verify->add_option("--q", o.q, "Children per non-root vertex for the isotropic suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        if (*green) return cmd_green(o);
        if (*kernel) return cmd_kernel(o);
        if (*poisson) return cmd_poisson(o);
        if (*recover) return cmd_recover(o);
        if (*poly) return cmd_poly(o);
        if (*iso) return cmd_isotropic(o);
        if (*fwd) return cmd_forward(o);
        if (*oracle) return cmd_oracle(o);
        if (*verify) return cmd_verify(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return kBadInput;
}
