#include "chainrec/metric.hpp"

namespace chainrec {

const EuclideanMetric& EuclideanMetric::instance() {
    static EuclideanMetric m;
    return m;
}

ProductMetric::ProductMetric(std::vector<int> block_sizes,
                             std::vector<double> diameters) {
    int off = 0;
    for (size_t i = 0; i < block_sizes.size(); ++i) {
        offsets_.push_back(off);
        off += block_sizes[i];
        scale_.push_back(std::pow(2.0, -static_cast<double>(i + 1)) /
                         (1.0 + diameters[i]));
    }
    offsets_.push_back(off);
}

double ProductMetric::dist(const PointD& a, const PointD& b) const {
    double total = 0;
    for (size_t i = 0; i + 1 < offsets_.size(); ++i) {
        double s = 0;
        for (int c = offsets_[i]; c < offsets_[i + 1]; ++c) {
            double d = a[c] - b[c];
            s += d * d;
        }
        total += scale_[i] * std::sqrt(s);
    }
    return total;
}

}  // namespace chainrec
