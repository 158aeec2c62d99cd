#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chainrec/crush.hpp"
#include "chainrec/io.hpp"
#include "fixtures.hpp"

#include <filesystem>
#include <fstream>

using namespace chainrec;
using namespace chainrec::fixtures;

namespace {

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "chainrec_io_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("complex JSON round trip is rational-exact") {
    auto k = std::make_shared<SimplicialComplex>(SimplicialComplex::close_complex(
        {{Rat(0), Rat(0)}, {Rat(1, 3), Rat(0)}, {Rat(1, 7), Rat(2, 3)}},
        {{0, 1, 2}}));
    json j = complex_to_json(*k);
    auto back = complex_from_json(j);
    CHECK(back->same_geometry(*k));
    CHECK(back->vertex(1)[0] == Rat(1, 3));
    CHECK(back->vertex(2)[1] == Rat(2, 3));
    // serialized rationals are "p/q" strings
    CHECK(j["vertices"][1][0] == "1/3");
}

TEST_CASE("complex JSON input accepts decimals and integers") {
    json j = {{"vertices", {{"0.25", 0}, {1, "5e-1"}}},
              {"maximal_simplices", {{0, 1}}}};
    auto k = complex_from_json(j);
    CHECK(k->vertex(0)[0] == Rat(1, 4));
    CHECK(k->vertex(1)[1] == Rat(1, 2));
}

TEST_CASE("malformed complex JSON raises FormatError") {
    CHECK_THROWS_AS(complex_from_json(json{{"vertices", json::array()}}),
                    FormatError);
    CHECK_THROWS_AS(
        complex_from_json(json{{"vertices", {{"x"}}},
                               {"maximal_simplices", {{0}}}}),
        FormatError);
    CHECK_THROWS_AS(
        complex_from_json(json{{"vertices", {{"0", "0"}}},
                               {"maximal_simplices", {{"a"}}}}),
        FormatError);
    CHECK_THROWS_AS(point_from_json(json::array()), FormatError);
}

TEST_CASE("vertex map files resolve source/target paths") {
    auto dir = temp_dir();
    auto crush = crush_vertex_map(interval(1));
    save_json(complex_to_json(*crush.kpp), (dir / "kpp.json").string());
    save_json(complex_to_json(*crush.kp), (dir / "kp.json").string());
    json j = vertex_map_to_json(crush.g, "kpp.json", "kp.json");
    auto back = vertex_map_from_json(j, dir.string());
    CHECK(back.assignment == crush.g.assignment);
    CHECK(back.source->same_geometry(*crush.kpp));
    CHECK(back.target->same_geometry(*crush.kp));
    CHECK(back.evaluate({Rat(3, 8)}) == crush.g.evaluate({Rat(3, 8)}));

    json broken = j;
    broken.erase("assignment");
    CHECK_THROWS_AS(vertex_map_from_json(broken, dir.string()), FormatError);
}

TEST_CASE("sampled map round trip, with and without a complex") {
    auto k = interval(2);
    auto net = sample_net(k, Rat(1, 8));
    auto f = sample_function(net, [](const Point& p) {
        return Point{p[0] * p[0]};
    });
    json j = sampled_map_to_json(f);
    auto back = sampled_map_from_json(j, k);
    CHECK(back.net->delta == net->delta);
    CHECK(back.net->points == net->points);
    CHECK(back.images == f.images);
    CHECK(back.net->carriers.size() == net->points.size());
    CHECK(back.net->complex == k);

    auto bare = sampled_map_from_json(j);
    CHECK(bare.net->complex == nullptr);
    CHECK(bare.net->carriers.empty());
    CHECK(bare.images == f.images);

    json mismatch = j;
    mismatch["images"].erase(0);
    CHECK_THROWS_AS(sampled_map_from_json(mismatch, k), FormatError);
}

TEST_CASE("SVG rendering: overlays, determinism, dimension guard") {
    auto k = unit_triangle();
    SvgOverlay ov{"cr_eps", {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, "#cc2222"};
    std::string svg = render_svg(*k, {ov});
    CHECK(svg.rfind("<svg", 0) == 0);
    size_t circles = 0;
    for (size_t at = svg.find("<circle"); at != std::string::npos;
         at = svg.find("<circle", at + 1))
        ++circles;
    CHECK(circles == 4);  // 3 overlay points + 1 legend swatch
    CHECK(svg.find("cr_eps (3)") != std::string::npos);
    CHECK(render_svg(*k, {ov}) == svg);  // byte-deterministic

    std::string bare = render_svg(*k, {});
    CHECK(bare.find("<circle") == std::string::npos);
    CHECK(bare.find("<line") != std::string::npos);

    CHECK_THROWS_AS(render_svg(*interval(1), {}), AmbientDimUnsupported);
}

TEST_CASE("load_json surfaces file and parse errors as FormatError") {
    CHECK_THROWS_AS(load_json("/nonexistent/nowhere.json"), FormatError);
    auto dir = temp_dir();
    auto bad = dir / "bad.json";
    {
        std::ofstream out(bad);
        out << "{ not json";
    }
    CHECK_THROWS_AS(load_json(bad.string()), FormatError);
}
