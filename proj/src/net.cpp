#include "chainrec/net.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

namespace chainrec {

namespace {

void lattice_points(int parts, int total, std::vector<int>& cur,
                    const std::function<void(const std::vector<int>&)>& emit) {
    if (parts == 1) {
        cur.push_back(total);
        emit(cur);
        cur.pop_back();
        return;
    }
    for (int i = 0; i <= total; ++i) {
        cur.push_back(i);
        lattice_points(parts - 1, total - i, cur, emit);
        cur.pop_back();
    }
}

Rat sqrt_upper(const Rat& v) {
    if (v == 0) return Rat(0);
    Rat r = rat_upper_bound(std::sqrt(to_double(v)) * (1 + 1e-12));
    while (r * r < v) r *= Rat(1000001, 1000000);
    return r;
}

}  // namespace

int Net::find_point(const Point& p) const {
    for (int i = 0; i < size(); ++i)
        if (points[i] == p) return i;
    return -1;
}

NetPtr sample_net(const ComplexPtr& k, const Rat& delta) {
    if (delta <= 0) throw BadParameter("delta must be positive");
    auto net = std::make_shared<Net>();
    net->complex = k;
    net->delta = delta;
    net->delta_d = to_double(delta);

    std::map<Point, int> seen;
    for (int id = 0; id < k->num_simplices(); ++id) {
        const Simplex& s = k->simplex(id);
        const int kd = static_cast<int>(s.size()) - 1;
        std::vector<Point> verts;
        for (int v : s) verts.push_back(k->vertex(v));
        int m = 1;
        if (kd >= 1) {
            double diam = std::sqrt(to_double(k->diam2(id)));
            m = std::max(1, static_cast<int>(std::ceil(kd * diam / net->delta_d - 1e-12)));
        }
        std::vector<int> cur;
        lattice_points(kd + 1, m, cur, [&](const std::vector<int>& lat) {
            std::vector<Rat> bary(kd + 1);
            for (int i = 0; i <= kd; ++i) bary[i] = Rat(lat[i], m);
            Point p = convex_combination(verts, bary);
            if (seen.count(p)) return;
            // Carrier: face spanned by positive coordinates.
            Simplex face;
            std::vector<Rat> fb;
            for (int i = 0; i <= kd; ++i)
                if (lat[i] > 0) { face.push_back(s[i]); fb.push_back(bary[i]); }
            std::sort(face.begin(), face.end());
            // bary order must follow the sorted face tuple
            {
                std::vector<std::pair<int, Rat>> pairs;
                for (int i = 0; i <= kd; ++i)
                    if (lat[i] > 0) pairs.emplace_back(s[i], bary[i]);
                std::sort(pairs.begin(), pairs.end(),
                          [](auto& a, auto& b) { return a.first < b.first; });
                fb.clear();
                for (auto& pr : pairs) fb.push_back(pr.second);
            }
            int fid = k->simplex_id(face);
            seen[p] = net->size();
            net->points_d.push_back(to_double(p));
            net->points.push_back(std::move(p));
            net->carriers.push_back({fid, std::move(fb)});
        });
    }
    return net;
}

void SampledMap::set_image(int i, Point p) {
    images_d[i] = to_double(p);
    images[i] = std::move(p);
}

SampledMap SampledMap::from_images(const NetPtr& net, std::vector<Point> images) {
    SampledMap m;
    m.net = net;
    m.images = std::move(images);
    m.images_d.resize(m.images.size());
    for (size_t i = 0; i < m.images.size(); ++i)
        m.images_d[i] = to_double(m.images[i]);
    return m;
}

int worker_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("CHAINREC_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < hw) hw = cap;
    }
    return hw;
}

namespace {

// Evaluates f at every net point, splitting the range across workers.
SampledMap sample_parallel(const NetPtr& net,
                           const std::function<Point(const Point&)>& f) {
    const int n = net->size();
    std::vector<Point> images(n);
    const int nt = std::min(worker_threads(), std::max(1, n / 256));
    if (nt <= 1) {
        for (int i = 0; i < n; ++i) images[i] = f(net->points[i]);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t)
            pool.emplace_back([&, t] {
                for (int i = t; i < n; i += nt) images[i] = f(net->points[i]);
            });
        for (auto& th : pool) th.join();
    }
    return SampledMap::from_images(net, std::move(images));
}

}  // namespace

SampledMap sample_vertex_map(const NetPtr& net, const VertexMap& m) {
    return sample_parallel(net, [&m](const Point& p) { return m.evaluate(p); });
}

SampledMap sample_function(const NetPtr& net,
                           const std::function<Point(const Point&)>& f) {
    return sample_parallel(net, f);
}

double sup_dist(const SampledMap& f, const SampledMap& g) {
    double best = 0;
    for (size_t i = 0; i < f.images_d.size(); ++i)
        best = std::max(best, dist_d(f.images_d[i], g.images_d[i]));
    return best;
}

Rat sup_dist_upper(const SampledMap& f, const SampledMap& g) {
    Rat best2 = 0;
    for (size_t i = 0; i < f.images.size(); ++i)
        best2 = std::max(best2, dist2(f.images[i], g.images[i]));
    return sqrt_upper(best2);
}

}  // namespace chainrec
