#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "martinkern/json_io.hpp"
#include "martinkern/polyharmonic.hpp"

using martinkern::json;

namespace {

const std::string cli = MARTINKERN_CLI;
const std::string data_dir = MARTINKERN_TEST_DATA;

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = "cd '" + data_dir + "' && '" + cli + "' " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

json run_json(const std::string& args, int expected = 0) {
    const Run r = run(args);
    REQUIRE(r.status == expected);
    return json::parse(r.out);
}

std::complex<double> as_complex(const json& j) { return {j[0].get<double>(), j[1].get<double>()}; }

} // namespace

TEST_SUITE("cli") {

TEST_CASE("green reports G = 2 on T_2 at lambda = 1") {
    const json j = run_json("green --spec t2srw.json --lambda 1.0");
    CHECK(std::abs(as_complex(j["G"]) - 2.0) < 1e-12);
    CHECK(std::abs(as_complex(j["F_up"]["A"][0]) - 0.5) < 1e-12);
    CHECK(j["rho"]["lo"].get<double>() <= 2 * std::sqrt(2.0) / 3);
    CHECK(j["rho"]["hi"].get<double>() >= 2 * std::sqrt(2.0) / 3);
}

TEST_CASE("exit codes") {
    CHECK(run("green --spec t2srw.json --lambda 0.5").status == 3);
    CHECK(run("green --spec bad.json --lambda 1.0").status == 2);
    CHECK(run("green --spec missing.json --lambda 1.0").status == 2);
    CHECK(run("green --spec t2srw.json --lambda abc").status == 2);
    CHECK(run("green --spec t2srw.json --lambda 1 --order 9").status == 2);
    CHECK(run("frobnicate").status == 2);
    CHECK(run("isotropic --q 2 --lambda 0.5").status == 4);
    CHECK(run("kernel --spec t2srw.json --lambda 0 --x [0] --arc [0,1]").status == 4);
    CHECK(run("verify --suite oracle --spec t2srw.json --lambda 0.9").status == 1);
    CHECK(run("--help").status == 0);
}

TEST_CASE("verify suites pass") {
    for (const std::string args : {"--suite eigen --spec t2srw.json --lambda 1.2",
                                   "--suite forward --spec binfwd.json --lambda 1.0",
                                   "--suite roundtrip --lambda 1.2 --dist d.json",
                                   "--suite oracle --spec t2srw.json --lambda 1.2",
                                   "--suite poly --spec t2srw.json --lambda 1.3",
                                   "--suite isotropic --q 3 --lambda 1.5",
                                   "--suite group --model free3.json --lambda 1.2"}) {
        CAPTURE(args);
        const json j = run_json("verify " + args);
        CHECK(j["pass"].get<bool>());
        CHECK_FALSE(j["checks"].empty());
    }
}

TEST_CASE("recover constant function") {
    const json j = run_json("recover --spec t2srw.json --lambda 1.0 --h ones --depth 2");
    const auto& carrier = j["carrier"];
    for (size_t i = 0; i < carrier.size(); ++i) {
        const auto depth = carrier[i].size();
        const double want = depth == 0 ? 1.0 : depth == 1 ? 1.0 / 3 : 1.0 / 6;
        CHECK(std::abs(as_complex(j["values"][i]) - want) < 1e-12);
    }
    CHECK(carrier.size() == 1 + 3 + 6);
}

TEST_CASE("poly synthesis is a scalar") {
    const json j = run_json("poly --synth rep.json --at [0,1]");
    REQUIRE(j["value"].is_array());
    CHECK(j["value"].size() == 2);
    CHECK(j["order"] == 2);
}

TEST_CASE("poly decompose of a tabulated synthesis") {
    const json rep = martinkern::read_json_file(data_dir + "/rep.json");
    const auto spec = martinkern::parse_tree_spec(rep["spec"]);
    json table{{"spec", rep["spec"]}, {"vertices", json::array()}, {"values", json::array()}};
    for (const auto& x : spec.ball(3)) {
        const json v = run_json("poly --synth rep.json --at " + x.to_string());
        table["vertices"].push_back(martinkern::vertex_to_json(x));
        table["values"].push_back(v["value"]);
    }
    const std::string tmp = (std::filesystem::temp_directory_path() / "martinkern_cli_poly.json").string();
    std::ofstream(tmp) << table.dump();

    const json back = run_json("poly --decompose '" + tmp + "' --lambda 1.2 --n 2 --depth 1");
    const auto original = martinkern::parse_poly(rep);
    const auto recovered = martinkern::parse_poly(back, &spec);
    REQUIRE(recovered.rep.order() == 2);
    for (size_t r = 0; r < 2; ++r) {
        for (const auto& [x, v] : original.rep.distributions[r].values()) {
            CHECK(std::abs(recovered.rep.distributions[r].values().at(x) - v) < 1e-8);
        }
    }
    // order 1 is too low, and a depth-2 carrier needs radius 4
    CHECK(run("poly --decompose '" + tmp + "' --lambda 1.2 --n 1 --depth 1").status == 2);
    CHECK(run("poly --decompose '" + tmp + "' --lambda 1.2 --n 2 --depth 2").status == 2);
    std::filesystem::remove(tmp);
}

TEST_CASE("oracle agrees with the solver") {
    const json j = run_json("oracle --spec t2srw.json --lambda 1.2 --N 40");
    const double diff = std::abs(as_complex(j["series"]) - as_complex(j["solver"]));
    CHECK(diff <= j["tail_bound"].get<double>() + 1e-8);
}

TEST_CASE("output is byte-identical across runs") {
    for (const std::string args : {"green --spec t2srw.json --lambda 1.1,0.2", "verify --suite roundtrip --lambda 1.2 --dist d.json --seed 5",
                                   "poisson --dist d.json --lambda 1.2 --radius 2 --format csv"}) {
        CAPTURE(args);
        const Run a = run(args), b = run(args);
        CHECK(a.status == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("csv table and output file") {
    const Run csv = run("poisson --dist d.json --lambda 1.2 --radius 1 --format csv");
    REQUIRE(csv.status == 0);
    std::istringstream lines(csv.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "vertex,re,im");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 4);

    const std::string tmp = (std::filesystem::temp_directory_path() / "martinkern_cli_out.json").string();
    const Run direct = run("green --spec t2srw.json --lambda 1.0");
    REQUIRE(run("green --spec t2srw.json --lambda 1.0 --output '" + tmp + "'").status == 0);
    std::ifstream in(tmp);
    std::stringstream written;
    written << in.rdbuf();
    CHECK(written.str() == direct.out);
    std::filesystem::remove(tmp);
}

}
