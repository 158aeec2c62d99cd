#include "chainrec/retraction.hpp"

#include "chainrec/errors.hpp"

#include <algorithm>
#include <cmath>

namespace chainrec {

NetPtr subnet(const NetPtr& net, const std::vector<int>& indices) {
    auto out = std::make_shared<Net>();
    out->complex = net->complex;
    out->delta = net->delta;
    out->delta_d = net->delta_d;
    for (int i : indices) {
        if (i < 0 || i >= net->size())
            throw PointNotInNet("subnet index " + std::to_string(i));
        out->points.push_back(net->points[i]);
        out->points_d.push_back(net->points_d[i]);
        if (!net->carriers.empty()) out->carriers.push_back(net->carriers[i]);
    }
    return out;
}

RetractionReport retraction_cr_harness(const SampledMap& f_on_sub,
                                       const NetPtr& full_net,
                                       const std::vector<int>& g_index,
                                       const std::vector<int>& r,
                                       const Rat& eps, const Metric& metric) {
    const int m = static_cast<int>(g_index.size());
    if (f_on_sub.net->size() != m)
        throw BadParameter("subnet map size does not match g_index");
    if (static_cast<int>(r.size()) != full_net->size())
        throw BadParameter("retraction table size does not match the net");
    for (int j = 0; j < m; ++j) {
        int v = g_index[j];
        if (v < 0 || v >= full_net->size())
            throw PointNotInNet("g_index entry " + std::to_string(v));
        if (f_on_sub.net->points[j] != full_net->points[v])
            throw BadParameter("subnet point " + std::to_string(j) +
                               " does not match full net point");
        if (r[v] != j)
            throw NotARetraction("r moves the G point at net index " +
                                 std::to_string(v));
    }
    for (int p = 0; p < full_net->size(); ++p)
        if (r[p] < 0 || r[p] >= m)
            throw NotARetraction("r sends net index " + std::to_string(p) +
                                 " outside G");

    // h = f o r on the full net
    std::vector<Point> himg(full_net->size());
    for (int p = 0; p < full_net->size(); ++p) himg[p] = f_on_sub.images[r[p]];
    auto h = SampledMap::from_images(full_net, std::move(himg));

    CrOptions opt;
    opt.metric = &metric;
    RetractionReport rep;
    rep.sub = cr_eps(f_on_sub, eps, opt);
    rep.full = cr_eps(h, eps, opt);

    for (int j : rep.sub.cr_points)
        if (!rep.full.in_cr[g_index[j]]) ++rep.inclusion_violations;
    rep.inclusion_exact = rep.inclusion_violations == 0;

    // converse: full CR points sit within eps+delta of cr_{3 eps}(f, G)
    auto sub3 = cr_eps(f_on_sub, 3 * eps, opt);
    const Rat tol = eps + full_net->delta;
    const double tol_d = to_double(tol);
    for (int p : rep.full.cr_points) {
        bool near = false;
        for (int j : sub3.cr_points) {
            if (metric.closer(full_net->points[p], full_net->points_d[p],
                              f_on_sub.net->points[j], f_on_sub.net->points_d[j],
                              tol, tol_d) ||
                full_net->points[p] == f_on_sub.net->points[j]) {
                near = true;
                break;
            }
        }
        if (!near) ++rep.converse_violations;
    }
    rep.converse_holds = rep.converse_violations == 0;
    return rep;
}

ProductRetraction product_truncation_retraction(
    const std::vector<NetPtr>& factors, int k,
    const std::vector<int>& basepoints) {
    const int nf = static_cast<int>(factors.size());
    if (nf == 0) throw BadParameter("empty factor list");
    if (k < 1 || k > nf) throw BadParameter("k must be in [1, #factors]");
    if (static_cast<int>(basepoints.size()) != nf)
        throw BadParameter("one basepoint per factor required");
    for (int i = 0; i < nf; ++i)
        if (basepoints[i] < 0 || basepoints[i] >= factors[i]->size())
            throw PointNotInNet("basepoint of factor " + std::to_string(i));

    ProductRetraction out;
    out.k = k;
    out.bound = std::pow(2.0, -k);
    for (int i = 0; i < nf; ++i) {
        out.block_sizes.push_back(factors[i]->ambient_dim());
        double diam = 0;
        for (int a = 0; a < factors[i]->size(); ++a)
            for (int b = a + 1; b < factors[i]->size(); ++b)
                diam = std::max(diam, dist_d(factors[i]->points_d[a],
                                             factors[i]->points_d[b]));
        out.diameters.push_back(diam);
    }
    out.metric = std::make_shared<ProductMetric>(out.block_sizes, out.diameters);

    auto net = std::make_shared<Net>();
    // metric-level density: d(x, net) <= sum_i 2^{-(i+1)} delta_i
    Rat delta = 0;
    for (int i = 0; i < nf; ++i)
        delta += factors[i]->delta * Rat(1, 1LL << (i + 1));
    net->delta = delta;
    net->delta_d = to_double(delta);

    // cartesian product, last factor fastest
    std::vector<int> idx(nf, 0);
    while (true) {
        Point p;
        for (int i = 0; i < nf; ++i)
            for (const Rat& c : factors[i]->points[idx[i]]) p.push_back(c);
        net->points_d.push_back(to_double(p));
        net->points.push_back(std::move(p));
        out.factor_of.push_back(idx);
        int i = nf - 1;
        for (; i >= 0; --i) {
            if (++idx[i] < factors[i]->size()) break;
            idx[i] = 0;
        }
        if (i < 0) break;
    }
    out.net = net;

    // strides for index arithmetic (last factor fastest)
    std::vector<long long> stride(nf, 1);
    for (int i = nf - 2; i >= 0; --i)
        stride[i] = stride[i + 1] * factors[i + 1]->size();

    std::vector<int> fixed_flag(net->size(), 1);
    out.r.resize(net->size());
    std::vector<long long> target_of(net->size());
    for (int p = 0; p < net->size(); ++p) {
        long long t = 0;
        bool fixed = true;
        for (int i = 0; i < nf; ++i) {
            int coord = out.factor_of[p][i];
            int pinned = i < k ? coord : basepoints[i];
            if (pinned != coord) fixed = false;
            t += stride[i] * pinned;
        }
        target_of[p] = t;
        fixed_flag[p] = fixed;
        if (fixed) out.g_index.push_back(p);
    }
    // r maps to positions within g_index
    std::vector<int> pos(net->size(), -1);
    for (int j = 0; j < static_cast<int>(out.g_index.size()); ++j)
        pos[out.g_index[j]] = j;
    for (int p = 0; p < net->size(); ++p) {
        int q = pos[static_cast<int>(target_of[p])];
        if (q < 0) throw NotARetraction("truncation target escaped G");
        out.r[p] = q;
    }
    return out;
}

}  // namespace chainrec
