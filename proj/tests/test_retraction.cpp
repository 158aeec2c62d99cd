#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chainrec/crush.hpp"
#include "chainrec/retraction.hpp"
#include "fixtures.hpp"

#include <algorithm>

using namespace chainrec;
using namespace chainrec::fixtures;

TEST_CASE("harness: retraction of [0,1] onto the origin") {
    auto k = interval(1);
    auto net = sample_net(k, Rat(1, 50));
    int zero = net->find_point({Rat(0)});
    REQUIRE(zero >= 0);
    std::vector<int> g_index = {zero};
    std::vector<int> r(net->size(), 0);
    auto sub = subnet(net, g_index);
    auto f = SampledMap::from_images(sub, {Point{Rat(0)}});

    auto rep = retraction_cr_harness(f, net, g_index, r, Rat(1, 10));
    CHECK(rep.sub.cr_points == std::vector<int>{0});
    CHECK(rep.inclusion_exact);
    CHECK(rep.converse_holds);
    // f o r is the constant 0, so full CR = {q : d(0,q) < eps}
    for (int p : rep.full.cr_points) CHECK(net->points_d[p][0] < 0.1);
    CHECK(rep.full.in_cr[zero]);
}

TEST_CASE("harness: G = [0,1/2] with r = min(x, 1/2) and the crush map on G") {
    auto k = interval(1);
    auto net = sample_net(k, Rat(1, 100));
    auto half = std::make_shared<SimplicialComplex>(
        SimplicialComplex::close_complex({{0}, {Rat(1, 2)}}, {{0, 1}}));
    auto pair = crush_vertex_map(half);

    std::vector<int> g_index;
    for (int p = 0; p < net->size(); ++p)
        if (net->points[p][0] <= Rat(1, 2)) g_index.push_back(p);
    auto sub = subnet(net, g_index);
    auto f = sample_vertex_map(sub, pair.g);

    std::vector<int> pos(net->size(), -1);
    for (int j = 0; j < static_cast<int>(g_index.size()); ++j)
        pos[g_index[j]] = j;
    std::vector<int> r(net->size());
    int at_half = -1;
    for (int j = 0; j < static_cast<int>(g_index.size()); ++j)
        if (sub->points[j] == Point{Rat(1, 2)}) at_half = j;
    REQUIRE(at_half >= 0);
    for (int p = 0; p < net->size(); ++p)
        r[p] = pos[p] >= 0 ? pos[p] : at_half;

    auto rep = retraction_cr_harness(f, net, g_index, r, Rat(1, 20));
    CHECK(rep.inclusion_exact);
    CHECK(rep.converse_holds);
    // CR of the crush map of [0,1/2] clusters at {0, 1/4, 1/2}
    for (int j : rep.sub.cr_points) {
        double x = sub->points_d[j][0];
        CHECK((x < 0.07 || std::abs(x - 0.25) < 0.07 || x > 0.43));
    }

    // a retraction moving a G point is rejected
    auto bad = r;
    bad[g_index[0]] = at_half == 0 ? 1 : 0;
    if (bad[g_index[0]] != r[g_index[0]])
        CHECK_THROWS_AS(retraction_cr_harness(f, net, g_index, bad, Rat(1, 20)),
                        NotARetraction);
}

TEST_CASE("product truncation retraction: bounds and fixed sets") {
    auto k = interval(1);
    auto f1 = sample_net(k, Rat(1, 4));  // 5 points
    std::vector<NetPtr> factors = {f1, f1, f1};
    std::vector<int> base = {0, 0, 0};

    auto r3 = product_truncation_retraction(factors, 3, base);
    CHECK(r3.net->size() == 125);
    CHECK(r3.bound == doctest::Approx(0.125));
    CHECK(static_cast<int>(r3.g_index.size()) == 125);  // identity
    for (int p = 0; p < r3.net->size(); ++p)
        CHECK(r3.g_index[r3.r[p]] == p);

    auto r1 = product_truncation_retraction(factors, 1, base);
    CHECK(r1.bound == doctest::Approx(0.5));
    CHECK(static_cast<int>(r1.g_index.size()) == 5);
    auto r2 = product_truncation_retraction(factors, 2, base);
    CHECK(static_cast<int>(r2.g_index.size()) == 25);

    // certified displacement bound in the product metric
    for (const auto& pr : {r1, r2, r3})
        for (int p = 0; p < pr.net->size(); ++p) {
            double d = pr.metric->dist(pr.net->points_d[p],
                                       pr.net->points_d[pr.g_index[pr.r[p]]]);
            CHECK(d <= pr.bound + 1e-12);
        }

    CHECK_THROWS_AS(product_truncation_retraction(factors, 0, base), BadParameter);
    CHECK_THROWS_AS(product_truncation_retraction(factors, 4, base), BadParameter);
    CHECK_THROWS_AS(product_truncation_retraction(factors, 2, {0, 9, 0}),
                    PointNotInNet);
}

TEST_CASE("product truncation composed with the CR harness") {
    auto k = interval(1);
    auto fine = sample_net(k, Rat(1, 16));  // 17 points per factor
    std::vector<NetPtr> factors = {fine, fine, fine};
    int b = fine->find_point({Rat(0)});
    auto pr = product_truncation_retraction(factors, 1, {b, b, b});

    // f on G: interval crush map in the first coordinate, basepoints pinned
    auto crush = crush_vertex_map(k);
    auto sub = subnet(pr.net, pr.g_index);
    std::vector<Point> images;
    for (int j = 0; j < sub->size(); ++j) {
        Point img = crush.g.evaluate({sub->points[j][0]});
        img.push_back(sub->points[j][1]);
        img.push_back(sub->points[j][2]);
        images.push_back(std::move(img));
    }
    auto f = SampledMap::from_images(sub, std::move(images));

    auto rep = retraction_cr_harness(f, pr.net, pr.g_index, pr.r, Rat(17, 100),
                                     *pr.metric);
    CHECK(rep.inclusion_exact);
    CHECK(rep.converse_holds);
    REQUIRE_FALSE(rep.sub.cr_points.empty());
    REQUIRE_FALSE(rep.full.cr_points.empty());
    CHECK(ProductMetric::truncation_bound(1) == doctest::Approx(pr.bound));
}
