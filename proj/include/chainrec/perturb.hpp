#pragma once

#include "chainrec/engine.hpp"
#include "chainrec/net.hpp"

#include <cstdint>
#include <vector>

namespace chainrec {

// One net ball U_i^j(r): the cell's points get mapped constantly onto the
// centre of the successor cell.
struct PerturbCell {
    int site = 0;  // i
    int node = 0;  // j along the lambda-chain of site i
    int r = 0;     // 0..l-1
    int center = -1;            // net index of p_i^j(r)
    std::vector<int> members;   // net indices within `radius` of the centre
};

struct PerturbPlan {
    NetPtr net;
    Rat epsilon;
    Rat eta;           // epsilon/7
    Rat lambda;        // < eta/3, shrunk by the sampled Lipschitz factor
    Rat radius;        // cell radius, lambda/(4l) before collision halving
    Rat delta_prime;   // 3/2 eta + 2 delta, the closeness budget
    Rat beta_max;      // certified robustness gap = radius
    int l = 0;
    std::uint64_t seed = 0;

    std::vector<int> sites;                 // S, net indices, eta-dense in cr_lambda
    std::vector<std::vector<int>> chains;   // per site: x_i^0..x_i^{n_i}
    std::vector<PerturbCell> cells;         // ordered site-major, then node, then r
    std::vector<int> cell_offset;           // first cell index per site

    int cell_at(int i, int j, int r) const {
        return cell_offset[i] + j * l + r;
    }
    // wrap rule: after the last node, continue at node 0 with r+1 (mod l)
    int next_cell(int c) const {
        const PerturbCell& cl = cells[c];
        if (cl.node + 1 < static_cast<int>(chains[cl.site].size()))
            return cell_at(cl.site, cl.node + 1, cl.r);
        return cell_at(cl.site, 0, (cl.r + 1) % l);
    }
};

// Prop.-6.5 plan: eta-dense sites in cr_lambda(f), a lambda-chain cycle per
// site, and l pairwise-disjoint cells per chain node.
// ChainNotFound when a site has no lambda-cycle; CellsCollide when cell
// carving fails even after halving the radius 8 times.
PerturbPlan make_plan(const SampledMap& f, const Rat& epsilon, int l,
                      std::uint64_t seed);

struct PerturbedMap {
    SampledMap g_prime;
    PerturbPlan plan;
    // one orbit per (site, r): the net indices of the designated periodic
    // points, of length l*(n_i+1)
    std::vector<std::vector<int>> designated_orbits;
    Rat certified_dist;  // rational upper bound on max_p d(f(p), g'(p))
};

// g' = next-cell constant on cells, f outside the lambda-balls, PL blend
// with carrier reprojection in between; certifies d(f, g') < delta_prime.
PerturbedMap build_perturbation(const SampledMap& f, const PerturbPlan& plan);

struct DensityReport {
    bool pass = false;
    int cr_size = 0;
    int failures = 0;         // CR points with < 2 designated points in range
    double worst_second = 0;  // max over CR points of 2nd-nearest target
};

// Every point of cr_eps(g') must see >= 2 designated periodic points within
// epsilon (discrete I_{eps,l} membership). Failures reported, never thrown.
DensityReport verify_density(const PerturbedMap& pm, const Rat& epsilon,
                             const Metric& metric = EuclideanMetric::instance());

struct RobustnessReport {
    bool pass = false;
    int trials = 0;
    int step_violations = 0;   // h(cell closure) escaped the successor cell
    int cr_cell_misses = 0;    // centre cycle broken => CR-meets-cell unproven
    double worst_step = 0;     // max observed d(h(u), successor centre)
};

// For `trials` random h with d(h, g') < beta: one-step containment
// h(U-bar_i^j(r)) inside U of the successor cell, and the centre cycle stays
// an eps-chain, so cr_eps(h) meets every cell closure. BetaTooLarge when
// beta reaches the certified gap.
RobustnessReport verify_robustness(const PerturbedMap& pm, const Rat& beta,
                                   int trials, std::uint64_t seed);

}  // namespace chainrec
