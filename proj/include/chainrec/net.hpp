#pragma once

#include "chainrec/vertex_map.hpp"

#include <functional>
#include <memory>

namespace chainrec {

// Finite delta-dense point sample of a polyhedron. Points are pairwise
// distinct; every simplex carries at least one net point.
struct Net {
    ComplexPtr complex;  // may be null for synthetic nets (products)
    Rat delta;
    double delta_d = 0;
    std::vector<Point> points;
    std::vector<PointD> points_d;
    std::vector<SimplicialComplex::Location> carriers;  // parallel to points

    int size() const { return static_cast<int>(points.size()); }
    int ambient_dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
    // Exact-match lookup; -1 when absent.
    int find_point(const Point& p) const;
};

using NetPtr = std::shared_ptr<const Net>;

// Deterministic lattice net: each simplex of dimension k gets the
// barycentric lattice of resolution ceil(k * diam / delta).
NetPtr sample_net(const ComplexPtr& k, const Rat& delta);

// Discrete self-map: per-net-point image in |K| (not necessarily a net point).
struct SampledMap {
    NetPtr net;
    std::vector<Point> images;
    std::vector<PointD> images_d;

    void set_image(int i, Point p);
    static SampledMap from_images(const NetPtr& net, std::vector<Point> images);
};

// Worker count for data-parallel sampling: hardware concurrency, capped by
// the CHAINREC_THREADS environment variable when set.
int worker_threads();

// Evaluates |m| at every net point.
SampledMap sample_vertex_map(const NetPtr& net, const VertexMap& m);
// Evaluates an arbitrary exact point function at every net point.
SampledMap sample_function(const NetPtr& net, const std::function<Point(const Point&)>& f);

// Sampled sup-distance between two maps on the same net.
double sup_dist(const SampledMap& f, const SampledMap& g);
// Rational upper bound of the sampled sup-distance (safe for bound checks).
Rat sup_dist_upper(const SampledMap& f, const SampledMap& g);

}  // namespace chainrec
