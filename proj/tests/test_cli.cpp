// End-to-end checks of the `chainrec` binary: exit codes, report schemas,
// and byte-determinism of artifacts for a fixed config+seed.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chainrec/io.hpp"
#include "fixtures.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace chainrec;
using namespace chainrec::fixtures;

namespace {

namespace fs = std::filesystem;

fs::path workdir() {
    auto dir = fs::temp_directory_path() / "chainrec_cli_test";
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args) {
    std::string cmd = std::string(CHAINREC_BIN) + " " + args + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Inputs {
    fs::path dir = workdir();
    fs::path triangle = dir / "triangle.json";
    fs::path segment = dir / "segment.json";
    fs::path fine_seg = dir / "fine_seg.json";
    fs::path tri_id = dir / "tri_id.json";
    fs::path seg_id = dir / "seg_id.json";
    fs::path fine_id = dir / "fine_id.json";

    Inputs() {
        save_json(complex_to_json(*unit_triangle()), triangle.string());
        save_json(complex_to_json(*interval(1)), segment.string());
        save_json(complex_to_json(*interval(4)), fine_seg.string());
        save_json(json{{"source", "fine_seg.json"},
                       {"target", "fine_seg.json"},
                       {"assignment", {0, 1, 2, 3, 4}}},
                  fine_id.string());
        save_json(json{{"source", "triangle.json"},
                       {"target", "triangle.json"},
                       {"assignment", {0, 1, 2}}},
                  tri_id.string());
        save_json(json{{"source", "segment.json"},
                       {"target", "segment.json"},
                       {"assignment", {0, 1}}},
                  seg_id.string());
    }
};

}  // namespace

TEST_CASE("subdivide emits K' with 25 simplices for the 2-simplex") {
    Inputs in;
    auto out = in.dir / "tri_sub.json";
    REQUIRE(run("subdivide --complex " + in.triangle.string() + " --out " +
                out.string()) == 0);
    auto kp = load_complex(out.string());
    CHECK(kp->num_simplices() == 25);
    CHECK(kp->num_vertices() == 7);
}

TEST_CASE("cr-analyze: identity map recurs everywhere; SVG and determinism") {
    Inputs in;
    auto rep_path = in.dir / "cr.json";
    auto svg_path = in.dir / "cr.svg";
    std::string cmd = "cr-analyze --complex " + in.triangle.string() +
                      " --map " + in.tri_id.string() +
                      " --epsilon 3/20 --delta 1/20 --svg " + svg_path.string() +
                      " --out " + rep_path.string();
    REQUIRE(run(cmd) == 0);
    json rep = load_json(rep_path.string());
    int n = sample_net(unit_triangle(), Rat(1, 20))->size();
    CHECK(rep["cr_count"] == n);
    CHECK(rep["epsilon"] == "3/20");
    CHECK(rep["isolated_count"] == 0);
    CHECK(rep["components"].size() == 1);
    CHECK(rep["components"][0]["diameter"].get<double>() ==
          doctest::Approx(rep["d1"].get<double>()));
    CHECK(slurp(svg_path).rfind("<svg", 0) == 0);

    auto first = slurp(rep_path);
    auto svg_first = slurp(svg_path);
    REQUIRE(run(cmd) == 0);
    CHECK(slurp(rep_path) == first);        // byte-identical rerun
    CHECK(slurp(svg_path) == svg_first);
}

TEST_CASE("cr-analyze measure: uniform weights on the identity give ~1") {
    Inputs in;
    auto wpath = in.dir / "weights.json";
    save_json(json("uniform"), wpath.string());
    auto rep_path = in.dir / "cr_measure.json";
    REQUIRE(run("cr-analyze --complex " + in.segment.string() + " --map " +
                in.seg_id.string() +
                " --epsilon 3/20 --delta 1/20 --measure " + wpath.string() +
                " --out " + rep_path.string()) == 0);
    json rep = load_json(rep_path.string());
    CHECK(rep["measure"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("crush-map artifacts round-trip and the report bounds hold") {
    Inputs in;
    std::string prefix = (in.dir / "crush").string();
    REQUIRE(run("crush-map --complex " + in.segment.string() +
                " --out-prefix " + prefix +
                " --epsilon 3/40 --delta 1/40") == 0);
    auto m = vertex_map_from_json(load_json(prefix + ".map.json"), in.dir.string());
    m.validate();
    json rep = load_json(prefix + ".report.json");
    double mesh = rep["mesh"].get<double>();
    CHECK(parse_rat(rep["sup_dist_to_id"].get<std::string>()) <= Rat(1));
    CHECK(rep["d1_cr"].get<double>() <=
          mesh + rep["slack"].get<double>() + 1e-12);
}

TEST_CASE("pipeline: interval identity at eps = 1/2 meets the d1 bound") {
    Inputs in;
    auto rep_path = in.dir / "pipeline.json";
    REQUIRE(run("pipeline --complex " + in.fine_seg.string() + " --map " +
                in.fine_id.string() +
                " --epsilon 1/2 --delta 1/50 --out " + rep_path.string()) == 0);
    json rep = load_json(rep_path.string());
    CHECK(rep["d1_cr"].get<double>() <=
          rep["mesh"].get<double>() + rep["slack"].get<double>() + 1e-12);
    CHECK(parse_rat(rep["sup_dist_fh"].get<std::string>()) < Rat(1));
}

TEST_CASE("perturb: manifest, verification, and seed determinism") {
    Inputs in;
    auto out1 = in.dir / "gprime1.json";
    auto out2 = in.dir / "gprime2.json";
    std::string base = "perturb --complex " + in.segment.string() + " --map " +
                       in.seg_id.string() +
                       " --epsilon 3/10 --delta 1/2000 --l 2 --seed 11 --out ";
    REQUIRE(run(base + out1.string()) == 0);
    REQUIRE(run(base + out2.string()) == 0);
    CHECK(slurp(out1) == slurp(out2));

    json j = load_json(out1.string());
    CHECK(j["verification"]["density"]["pass"] == true);
    CHECK(j["verification"]["robustness"]["pass"] == true);
    CHECK_FALSE(j["plan"]["sites"].empty());
    CHECK_FALSE(j["plan"]["orbits"].empty());
    for (const auto& orbit : j["plan"]["orbits"]) CHECK(orbit.size() >= 2);
    // the emitted g' is a valid sampled-map file
    auto g = sampled_map_from_json(j, interval(1));
    CHECK(g.net->size() == static_cast<int>(j["points"].size()));
}

TEST_CASE("exit codes: 2 input, 3 precondition") {
    Inputs in;
    auto out = (in.dir / "never.json").string();
    CHECK(run("subdivide --complex /nonexistent.json --out " + out) == 2);
    // epsilon below the 3*delta floor
    CHECK(run("cr-analyze --complex " + in.segment.string() + " --map " +
              in.seg_id.string() + " --epsilon 1/100 --delta 1/20 --out " +
              out) == 3);
    // perturb with l = 1
    CHECK(run("perturb --complex " + in.segment.string() + " --map " +
              in.seg_id.string() +
              " --epsilon 3/10 --delta 1/2000 --l 1 --seed 1 --out " + out) == 3);
}
