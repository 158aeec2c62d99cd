#pragma once

#include "chainrec/rational.hpp"

#include <optional>
#include <vector>

namespace chainrec {

// A point of Euclidean d-space with exact rational coordinates.
using Point = std::vector<Rat>;
using PointD = std::vector<double>;

PointD to_double(const Point& p);
Point to_rat(const PointD& p);

Rat dist2(const Point& a, const Point& b);
double dist_d(const PointD& a, const PointD& b);
double dist_d(const Point& a, const Point& b);

// Exact comparison d(a,b) < eps, with a double fast path.
bool closer_than(const Point& a, const PointD& ad, const Point& b,
                 const PointD& bd, const Rat& eps, double eps_d);
inline bool closer_than(const Point& a, const Point& b, const Rat& eps) {
    return closer_than(a, to_double(a), b, to_double(b), eps, to_double(eps));
}

// Barycentric coordinates of x with respect to the affine span of `verts`
// (all coordinates, summing to 1). Empty result if x is not in the span.
// Coordinates may be negative; the caller decides containment.
std::optional<std::vector<Rat>> barycentric(const std::vector<Point>& verts,
                                            const Point& x);

bool affinely_independent(const std::vector<Point>& verts);

Point convex_combination(const std::vector<Point>& verts,
                         const std::vector<Rat>& coeffs);

}  // namespace chainrec
