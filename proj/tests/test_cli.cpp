#include "doctest.h"
#include "oracles.hpp"
#include "relutope/cli.hpp"
#include "relutope/metric.hpp"
#include "relutope/network.hpp"
#include "relutope/persistence.hpp"
#include "relutope/sampling.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "json.hpp"

using namespace relutope;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class Scratch {
public:
    Scratch() {
        static int counter = 0;
        dir_ = fs::temp_directory_path() / ("relutope_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(dir_);
    }
    ~Scratch() { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string write(const std::string& name, const std::string& body) const {
        std::ofstream(path(name)) << body;
        return path(name);
    }

private:
    fs::path dir_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::string kFourCycle = "1\n2,1\n1,2,1\n";
const std::string kNet2331 = TEST_DATA_DIR "/net_2331.json";

}  // namespace

TEST_CASE("bits of a single point") {
    Scratch s;
    const auto net = s.write("net.json", R"({"input_dim": 1, "layers": [{"weights": [[1]], "bias": [0]},
                                                                 {"weights": [[1]], "bias": [0]}]})");
    const auto pts = s.write("p.json", R"({"points": [[2.5]]})");
    auto r = run({"bits", "--net", net, "--points", pts});
    CHECK(r.code == 0);
    CHECK(r.out == "1\n");
    s.write("q.json", R"({"points": [[-1], [0]]})");
    CHECK(run({"bits", "--net", net, "--points", s.path("q.json")}).out == "0\n0\n");
    s.write("bad.json", R"({"points": [[1, 2]]})");
    CHECK(run({"bits", "--net", net, "--points", s.path("bad.json")}).code == exit_input_format);
}

TEST_CASE("circle samples through bits and distmat match the in-process path") {
    Scratch s;
    std::mt19937_64 rng(61);
    const NetworkSpec net = oracle::random_network(rng, 3, {10, 10, 10});
    {
        std::ofstream f(s.path("net.json"));
        save_network(net, f);
    }
    s.write("anchors.json", R"({"points": [[0, 1, 0], [0, 0, 1]]})");
    REQUIRE(run({"sample-circle", "--anchors", s.path("anchors.json"), "--count", "20", "-o", s.path("pts.json")}).code == 0);
    REQUIRE(run({"bits", "--net", s.path("net.json"), "--points", s.path("pts.json"), "-o", s.path("bits.txt")}).code == 0);
    const std::string bits = slurp(s.path("bits.txt"));
    CHECK(std::count(bits.begin(), bits.end(), '\n') == 20);
    REQUIRE(run({"distmat", "--bits", s.path("bits.txt"), "--dedup", "-o", s.path("d.ldm")}).code == 0);

    AnchorFamily fam{{Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 0, 1)}, 1.0, std::nullopt};
    std::vector<BitVector> vs;
    for (const auto& x : circle_samples(fam, 20)) vs.push_back(bit_vector(net, x));
    std::ostringstream direct;
    export_lower_distance(hamming_matrix(vs, true), direct);
    CHECK(slurp(s.path("d.ldm")) == direct.str());

    // persistence from the file equals the in-process barcode
    const auto r = run({"persist", "--matrix", s.path("d.ldm")});
    std::ostringstream json;
    write_barcode_json(persistent_homology(hamming_matrix(vs, true), 1).without_zero_length(), json);
    CHECK(r.out == json.str());
}

TEST_CASE("enumerate: both modes write identical atlases") {
    Scratch s;
    REQUIRE(run({"enumerate", "--net", kNet2331, "--mode", "brute", "--out", s.path("b")}).code == 0);
    REQUIRE(run({"enumerate", "--net", kNet2331, "--mode", "traverse", "--out", s.path("t")}).code == 0);
    CHECK(slurp(s.path("b.regions.jsonl")) == slurp(s.path("t.regions.jsonl")));
    CHECK(slurp(s.path("b.edges.txt")) == slurp(s.path("t.edges.txt")));
    CHECK(!slurp(s.path("b.edges.txt")).empty());

    // x, y > 0 near (2, 0.5): one region inside the box
    REQUIRE(run({"enumerate", "--net", kNet2331, "--lower", "1.9,0.4", "--upper", "2.1,0.6", "--out", s.path("box")}).code == 0);
    const std::string regions = slurp(s.path("box.regions.jsonl"));
    CHECK(std::count(regions.begin(), regions.end(), '\n') == 1);
    CHECK(regions.find("\"boundary_flag\":true") != std::string::npos);
}

TEST_CASE("enumerate exit codes") {
    Scratch s;
    std::mt19937_64 rng(62);
    const NetworkSpec wide = oracle::random_network(rng, 2, {30});
    {
        std::ofstream f(s.path("wide.json"));
        save_network(wide, f);
    }
    CHECK(run({"enumerate", "--net", s.path("wide.json"), "--mode", "brute", "--out", s.path("w")}).code ==
          exit_resource_cap);
    CHECK(run({"enumerate", "--net", kNet2331, "--lower", "0,0", "--upper", "1,1", "--seed-point", "3,3", "--out",
               s.path("x")}).code == exit_infeasible);
    CHECK(run({"enumerate", "--net", kNet2331, "--lower", "0", "--upper", "1,1", "--out", s.path("x")}).code ==
          exit_input_format);
    CHECK(run({"enumerate", "--net", kNet2331, "--mode", "magic", "--out", s.path("x")}).code == exit_usage);
    const auto warn = run({"enumerate", "--net", kNet2331, "--mode", "brute", "--max-brute-bits", "26", "--out", s.path("y")});
    CHECK(warn.code == 0);
    CHECK(warn.err.find("warning") != std::string::npos);
}

TEST_CASE("persist examples") {
    Scratch s;
    auto r = run({"persist", "--matrix", s.write("c.ldm", kFourCycle)});
    CHECK(r.code == 0);
    CHECK(r.out == R"([{"bars":[[0,1],[0,1],[0,1],[0,null]],"dim":0},{"bars":[[1,2]],"dim":1}])"
                   "\n");
    r = run({"persist", "--matrix", s.write("one.ldm", "")});
    CHECK(r.out == R"([{"bars":[[0,null]],"dim":0},{"bars":[],"dim":1}])"
                   "\n");
    r = run({"persist", "--matrix", s.path("c.ldm"), "--include-zero", "--text", s.path("table.txt")});
    CHECK(r.out.find("[2,2]") != std::string::npos);
    CHECK(!slurp(s.path("table.txt")).empty());
    r = run({"persist", "--matrix", s.write("bad.ldm", "1\n2\n")});
    CHECK(r.code == exit_input_format);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK(run({"persist", "--matrix", s.path("missing.ldm")}).code == exit_input_format);
}

TEST_CASE("combine and export-ldm") {
    Scratch s;
    const auto a = s.write("a.ldm", "2\n1,3\n");
    const auto b = s.write("b.ldm", "1\n4,2\n");
    CHECK(run({"combine", "--a", a, "--b", a, "--op", "min"}).out == "2\n1,3\n");
    CHECK(run({"combine", "--a", a, "--b", b, "--op", "max"}).out == "2\n4,3\n");
    CHECK(run({"combine", "--a", a, "--b", b}).out == "1\n1,2\n");
    CHECK(run({"combine", "--a", a, "--b", s.write("c.ldm", "1\n")}).code == exit_input_format);

    const auto full = s.write("full.csv", "0 0.1 7\n0.1 0 1e-5\n7 1e-5 0\n");
    const auto r = run({"export-ldm", "--matrix", full, "-o", s.path("e.ldm")});
    CHECK(r.code == 0);
    CHECK(slurp(s.path("e.ldm")) == "0.1\n7,1e-05\n");
    CHECK(run({"export-ldm", "--matrix", s.write("asym.csv", "0 1\n2 0\n")}).code == exit_input_format);
}

TEST_CASE("region dump") {
    const auto r = run({"region", "--net", kNet2331, "--point", "2,0.5"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["bits"] == "111111");
    CHECK(doc["on_boundary"] == false);
    CHECK(doc["essential"]["rows"].size() == doc["active_bits"].size());
    CHECK(run({"region", "--net", kNet2331, "--point", "2"}).code == exit_input_format);
}

TEST_CASE("anchors and torus") {
    Scratch s;
    const auto a = run({"--seed", "4", "gen-anchors", "--dim", "6", "--count", "5"});
    CHECK(a.code == 0);
    CHECK(run({"--seed", "4", "gen-anchors", "--dim", "6", "--count", "5"}).out == a.out);
    CHECK(run({"gen-anchors", "--dim", "2", "--count", "5"}).code == exit_usage);
    s.write("anchors.json", a.out);
    auto t = run({"sample-torus", "--anchors", s.path("anchors.json"), "--n1", "4", "--n2", "5"});
    CHECK(t.code == 0);
    CHECK(nlohmann::json::parse(t.out)["points"].size() == 20);
    t = run({"sample-torus", "--anchors", s.path("anchors.json"), "--uniform", "7"});
    CHECK(nlohmann::json::parse(t.out)["points"].size() == 7);
    REQUIRE(run({"distmat", "--points", s.path("anchors.json"), "--euclidean"}).code == 0);
    CHECK(run({"distmat", "--points", s.path("anchors.json")}).code == exit_usage);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == exit_usage);
    CHECK(run({"frobnicate"}).code == exit_usage);
    CHECK(run({"persist"}).code == exit_usage);
    CHECK(run({"--tau-lp", "-1", "persist", "--matrix", "x"}).code == exit_usage);
    CHECK(run({"--help"}).code == 0);
}
