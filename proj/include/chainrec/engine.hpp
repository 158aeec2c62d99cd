#pragma once

#include "chainrec/metric.hpp"
#include "chainrec/net.hpp"

#include <optional>
#include <unordered_map>
#include <vector>

namespace chainrec {

// Uniform-cell point index for radius queries.
class SpatialGrid {
  public:
    SpatialGrid() = default;
    SpatialGrid(const std::vector<PointD>& points, double cell);

    bool empty() const { return cell_ <= 0; }
    // Member lists of all cells covering the ball around `center`.
    std::vector<const std::vector<int>*> covering(const PointD& center,
                                                  double radius) const;
    template <typename F>
    void for_candidates(const PointD& center, double radius, F&& fn) const {
        for (const auto* lst : covering(center, radius))
            for (int i : *lst) fn(i);
    }

  private:
    uint64_t key(const std::vector<long long>& c) const;
    double cell_ = 0;
    int dim_ = 0;
    std::unordered_map<uint64_t, std::vector<int>> cells_;
};

// Transition digraph p -> q iff d(f(p), q) < eps. Successors are enumerated
// lazily through the grid; edges are never materialized.
class EpsGraph {
  public:
    EpsGraph(const SampledMap& f, const Rat& eps, const Metric& metric);

    int size() const { return static_cast<int>(f_->net->size()); }
    const Rat& epsilon() const { return eps_; }
    const SampledMap& map() const { return *f_; }
    const Metric& metric() const { return *metric_; }

    bool edge(int p, int q) const;
    bool has_self_loop(int p) const { return edge(p, p); }
    // Candidate member lists for successors of p (superset; filter by edge()).
    std::vector<const std::vector<int>*> candidate_lists(int p) const;
    std::vector<int> successors(int p) const;

  private:
    const SampledMap* f_;
    Rat eps_;
    double eps_d_;
    const Metric* metric_;
    SpatialGrid grid_;
    std::vector<int> all_;  // brute-force fallback for gridless metrics
};

struct CRReport {
    std::vector<int> cr_points;                 // net indices, sorted
    std::vector<char> in_cr;                    // indicator over the net
    std::vector<std::vector<int>> components;   // link-radius partition
    double d1 = 0;                              // max component diameter
    std::vector<int> isolated;                  // eps-isolated CR points
    double measure = -1;                        // -1 when no weights given
    Rat epsilon;
    Rat delta;
    double link_radius = 0;
};

struct CrOptions {
    const Metric* metric = &EuclideanMetric::instance();
    double link_radius = -1;               // default 2*delta
    const std::vector<double>* weights = nullptr;  // per-point mu-mass
    bool stats = true;                     // fill components/d1/isolated
    bool enforce_eps_floor = true;         // require eps >= 3*delta
};

// Chain recurrent net points: members of a directed cycle of the eps-graph.
CRReport cr_eps(const SampledMap& f, const Rat& eps, const CrOptions& opt = {});

// Indices lying on a directed cycle, by brute-force reachability. Test oracle.
std::vector<int> brute_force_cycle_points(const SampledMap& f, const Rat& eps,
                                          const Metric& metric = EuclideanMetric::instance());

// Trap certificate: forward eps-reach set of x's successors. nullopt when
// x is chain recurrent.
std::optional<std::vector<int>> certify_non_recurrent(
    const SampledMap& f, int x, const Rat& eps,
    const Metric& metric = EuclideanMetric::instance());

// Max diameter of the link_radius-connectivity components of `points`.
double d1_estimate(const std::vector<PointD>& points, double link_radius,
                   const Metric& metric = EuclideanMetric::instance());

// Upper mu-estimate: total weight of the eps-fattening of `subset`.
double measure_estimate(const SampledMap& f, const std::vector<int>& subset,
                        const Rat& eps, const std::vector<double>& weights,
                        const Metric& metric = EuclideanMetric::instance());

struct StabilityReport {
    bool holds = false;
    Rat shift;            // certified sup-distance upper bound Delta
    int violations = 0;
};
// Discrete upper semi-continuity: cr_eps(f) subset of cr_{eps+Delta}(g).
StabilityReport usc_stability_check(const SampledMap& f, const SampledMap& g,
                                    const Rat& eps,
                                    const Metric& metric = EuclideanMetric::instance());

// Union of delta-linked fiber components of diameter >= a; fibers taken
// over the target net points at tolerance y_tol.
std::vector<int> fiber_components(const SampledMap& f,
                                  const std::vector<PointD>& targets,
                                  double a, const Rat& y_tol,
                                  const Metric& metric = EuclideanMetric::instance());

}  // namespace chainrec
