#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chainrec/crush.hpp"
#include "chainrec/perturb.hpp"
#include "fixtures.hpp"

#include <algorithm>
#include <set>

using namespace chainrec;
using namespace chainrec::fixtures;

namespace {

NetPtr fine_interval_net() {
    static NetPtr net = sample_net(interval(1), Rat(1, 2000));
    return net;
}

void check_plan_invariants(const PerturbPlan& plan, const SampledMap& f) {
    const Net& net = *plan.net;
    CHECK(plan.eta == plan.epsilon / 7);
    CHECK(plan.lambda * 3 <= plan.eta);  // lambda < eta/3 up to the 99/100
    CHECK(plan.lambda >= 3 * net.delta);
    CHECK(plan.delta_prime == Rat(3, 2) * plan.eta + 2 * net.delta);
    CHECK(plan.delta_prime * 4 < plan.epsilon);
    CHECK(plan.beta_max == plan.radius);
    REQUIRE_FALSE(plan.sites.empty());
    REQUIRE(plan.chains.size() == plan.sites.size());

    // eta-density of the sites inside cr_lambda(f)
    CrOptions opt;
    opt.stats = false;
    auto crl = cr_eps(f, plan.lambda, opt);
    const double eta_d = to_double(plan.eta);
    for (int p : crl.cr_points) {
        double best = 1e18;
        for (int s : plan.sites)
            best = std::min(best, dist_d(net.points_d[p], net.points_d[s]));
        CHECK(best <= eta_d + 1e-9);
    }

    // every chain is a lambda-cycle starting at its site
    const Rat lam2 = plan.lambda * plan.lambda;
    for (size_t i = 0; i < plan.chains.size(); ++i) {
        const auto& ch = plan.chains[i];
        REQUIRE_FALSE(ch.empty());
        CHECK(ch.front() == plan.sites[i]);
        for (size_t j = 0; j < ch.size(); ++j) {
            int nxt = ch[(j + 1) % ch.size()];
            CHECK(dist2(f.images[ch[j]], net.points[nxt]) < lam2);
        }
    }

    // cell structure: l cells per chain node, centres inside B_lambda(node),
    // pairwise separation strictly above 2*radius + 4*delta
    size_t expect = 0;
    for (const auto& ch : plan.chains) expect += ch.size() * plan.l;
    REQUIRE(plan.cells.size() == expect);
    const Rat sep2 =
        (2 * plan.radius + 4 * net.delta) * (2 * plan.radius + 4 * net.delta);
    const Rat rad2 = plan.radius * plan.radius;
    for (size_t a = 0; a < plan.cells.size(); ++a) {
        const auto& ca = plan.cells[a];
        int node = plan.chains[ca.site][ca.node];
        CHECK(dist2(net.points[ca.center], net.points[node]) < lam2);
        CHECK(plan.cell_at(ca.site, ca.node, ca.r) == static_cast<int>(a));
        REQUIRE_FALSE(ca.members.empty());
        CHECK(std::binary_search(ca.members.begin(), ca.members.end(),
                                 ca.center));
        for (int u : ca.members)
            CHECK(dist2(net.points[u], net.points[ca.center]) <= rad2);
        for (size_t b = a + 1; b < plan.cells.size(); ++b)
            CHECK(dist2(net.points[ca.center],
                        net.points[plan.cells[b].center]) > sep2);
    }
}

void check_orbits(const PerturbedMap& pm) {
    const PerturbPlan& plan = pm.plan;
    const Net& net = *plan.net;
    size_t expect = plan.sites.size() * plan.l;
    REQUIRE(pm.designated_orbits.size() == expect);
    size_t oi = 0;
    for (size_t i = 0; i < plan.sites.size(); ++i) {
        size_t n_nodes = plan.chains[i].size();
        for (int r = 0; r < plan.l; ++r, ++oi) {
            const auto& orbit = pm.designated_orbits[oi];
            // length l * (n_i + 1) and pairwise distinct points
            CHECK(orbit.size() == plan.l * n_nodes);
            std::set<int> uniq(orbit.begin(), orbit.end());
            CHECK(uniq.size() == orbit.size());
            // g' cycles the orbit exactly
            for (size_t t = 0; t < orbit.size(); ++t)
                CHECK(pm.g_prime.images[orbit[t]] ==
                      net.points[orbit[(t + 1) % orbit.size()]]);
        }
    }
}

}  // namespace

TEST_CASE("identity on [0,1]: plan, orbits, density, robustness") {
    auto net = fine_interval_net();
    auto f = sample_function(net, [](const Point& p) { return p; });
    auto plan = make_plan(f, Rat(3, 10), 2, 20260823);
    check_plan_invariants(plan, f);
    // identity: every site is a lambda-fixed point, chains have length 1
    for (const auto& ch : plan.chains) CHECK(ch.size() == 1);

    auto pm = build_perturbation(f, plan);
    CHECK(pm.certified_dist < plan.delta_prime);
    CHECK(sup_dist(f, pm.g_prime) <= to_double(pm.certified_dist));
    check_orbits(pm);

    auto dens = verify_density(pm, Rat(3, 10));
    CHECK(dens.pass);
    CHECK(dens.cr_size == net->size());  // identity: everything is recurrent
    CHECK(dens.worst_second < 0.3);

    auto rob = verify_robustness(pm, plan.beta_max / 2, 5, 7);
    CHECK(rob.pass);
    CHECK(rob.trials == 5);
    CHECK(rob.worst_step < to_double(plan.radius));
    CHECK_THROWS_AS(verify_robustness(pm, plan.beta_max, 3, 7), BetaTooLarge);
    CHECK_THROWS_AS(verify_robustness(pm, Rat(0), 3, 7), BadParameter);
}

TEST_CASE("interval crush map: l = 3, clusters at the crush fixed points") {
    auto net = fine_interval_net();
    auto crush = crush_vertex_map(interval(1));
    auto f = sample_vertex_map(net, crush.g);
    auto plan = make_plan(f, Rat(3, 10), 3, 99);
    check_plan_invariants(plan, f);
    // cr_lambda clusters at {0, 1/2, 1}: three sites, one per cluster
    CHECK(plan.sites.size() == 3);
    for (int s : plan.sites) {
        double x = net->points_d[s][0];
        CHECK((x < 0.02 || std::abs(x - 0.5) < 0.02 || x > 0.98));
    }

    auto pm = build_perturbation(f, plan);
    check_orbits(pm);
    CHECK(pm.designated_orbits.size() == 9);
    for (const auto& orbit : pm.designated_orbits) CHECK(orbit.size() == 3);

    auto dens = verify_density(pm, Rat(3, 10));
    CHECK(dens.pass);
    CHECK(dens.failures == 0);

    auto rob = verify_robustness(pm, plan.beta_max / 3, 4, 123);
    CHECK(rob.pass);

    // discrete upper semi-continuity back to the base map
    auto usc = usc_stability_check(pm.g_prime, f, Rat(3, 10));
    CHECK(usc.holds);
    CHECK(usc.shift <= plan.delta_prime);
}

TEST_CASE("make_plan parameter errors") {
    auto net = fine_interval_net();
    auto f = sample_function(net, [](const Point& p) { return p; });
    CHECK_THROWS_AS(make_plan(f, Rat(3, 10), 1, 1), BadParameter);
    CHECK_THROWS_AS(make_plan(f, Rat(0), 2, 1), BadParameter);

    // coarse net: lambda falls below the 3*delta resolution floor
    auto coarse = sample_net(interval(1), Rat(1, 250));
    auto fc = sample_function(coarse, [](const Point& p) { return p; });
    CHECK_THROWS_AS(make_plan(fc, Rat(1, 10), 2, 1), ChainNotFound);
    // lambda clears the floor, but no room for separated cells
    CHECK_THROWS_AS(make_plan(fc, Rat(3, 10), 2, 1), CellsCollide);
}

TEST_CASE("plans are deterministic in the seed") {
    auto net = fine_interval_net();
    auto f = sample_function(net, [](const Point& p) { return p; });
    auto a = make_plan(f, Rat(3, 10), 2, 42);
    auto b = make_plan(f, Rat(3, 10), 2, 42);
    CHECK(a.sites == b.sites);
    REQUIRE(a.cells.size() == b.cells.size());
    for (size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].center == b.cells[i].center);
        CHECK(a.cells[i].members == b.cells[i].members);
    }
    auto pa = build_perturbation(f, a);
    auto pb = build_perturbation(f, b);
    CHECK(pa.g_prime.images == pb.g_prime.images);
}
