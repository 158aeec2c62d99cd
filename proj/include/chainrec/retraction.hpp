#pragma once

#include "chainrec/engine.hpp"
#include "chainrec/metric.hpp"
#include "chainrec/net.hpp"

#include <memory>
#include <vector>

namespace chainrec {

// Net restricted to a subset of its points (same delta, reindexed).
NetPtr subnet(const NetPtr& net, const std::vector<int>& indices);

struct RetractionReport {
    CRReport sub;    // cr_eps(f) on the subnet G
    CRReport full;   // cr_eps(f o r) on the full net
    bool inclusion_exact = false;   // cr_eps(f,G) subset of cr_eps(f o r, X)
    int inclusion_violations = 0;
    bool converse_holds = false;    // cr_eps(f o r, X) inside the
    int converse_violations = 0;    // (eps+delta)-fattening of cr_{3eps}(f,G)
};

// Lemma-2.4 harness. `g_index` lists the full-net indices forming G (in the
// order of f_on_sub's net); `r` maps each full-net index to a position in
// g_index. r must fix G pointwise (NotARetraction otherwise).
RetractionReport retraction_cr_harness(
    const SampledMap& f_on_sub, const NetPtr& full_net,
    const std::vector<int>& g_index, const std::vector<int>& r, const Rat& eps,
    const Metric& metric = EuclideanMetric::instance());

struct ProductRetraction {
    NetPtr net;                       // product net, coordinates concatenated
    std::vector<int> block_sizes;     // per-factor ambient dims
    std::vector<double> diameters;    // per-factor ambient diameters
    std::shared_ptr<ProductMetric> metric;
    std::vector<std::vector<int>> factor_of;  // product index -> factor indices
    std::vector<int> r;               // pins coordinates beyond k to basepoints
    std::vector<int> g_index;         // fixed points of r, sorted
    double bound = 0;                 // certified d(r, id) <= 2^{-k}
    int k = 0;
};

// Theorem-5.1(2) truncation retraction of a finite product: keeps the first
// k factor coordinates, pins the rest to the given basepoint net indices.
ProductRetraction product_truncation_retraction(
    const std::vector<NetPtr>& factors, int k,
    const std::vector<int>& basepoints);

}  // namespace chainrec
