#pragma once

#include "chainrec/geometry.hpp"

#include <cmath>
#include <memory>
#include <vector>

namespace chainrec {

// Distance abstraction for the chain-recurrence engine. The Euclidean
// metric compares exactly in rationals; others fall back to doubles with
// a 1e-9 guard band.
class Metric {
  public:
    virtual ~Metric() = default;
    virtual double dist(const PointD& a, const PointD& b) const = 0;
    // Strict d(a,b) < eps.
    virtual bool closer(const Point& a, const PointD& ad, const Point& b,
                        const PointD& bd, const Rat& eps, double eps_d) const = 0;
    // Euclidean radius whose ball contains the metric eps-ball, for grid
    // candidate pruning; <= 0 disables the grid (brute-force scan).
    virtual double grid_radius(double eps_d) const = 0;
};

class EuclideanMetric final : public Metric {
  public:
    double dist(const PointD& a, const PointD& b) const override { return dist_d(a, b); }
    bool closer(const Point& a, const PointD& ad, const Point& b, const PointD& bd,
                const Rat& eps, double eps_d) const override {
        return closer_than(a, ad, b, bd, eps, eps_d);
    }
    double grid_radius(double eps_d) const override { return eps_d; }
    static const EuclideanMetric& instance();
};

// d(x,y) = sum_i 2^{-(i+1)} d_i(x_i, y_i) / (1 + diam_i) over coordinate
// blocks of the product. Double precision with guard band.
class ProductMetric final : public Metric {
  public:
    ProductMetric(std::vector<int> block_sizes, std::vector<double> diameters);
    double dist(const PointD& a, const PointD& b) const override;
    bool closer(const Point& a, const PointD& ad, const Point& b, const PointD& bd,
                const Rat& eps, double eps_d) const override {
        (void)a; (void)b; (void)eps;
        return dist(ad, bd) < eps_d - 1e-9;
    }
    double grid_radius(double) const override { return -1; }

    // Upper bound on the tail sum over factors with index > k (1-based).
    static double truncation_bound(int k) { return std::pow(2.0, -k); }

  private:
    std::vector<int> offsets_;
    std::vector<double> scale_;
};

}  // namespace chainrec
