#include "chainrec/engine.hpp"

#include "chainrec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace chainrec {

namespace {

uint64_t splitmix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

SpatialGrid::SpatialGrid(const std::vector<PointD>& points, double cell) {
    if (points.empty() || cell <= 0) return;
    cell_ = cell;
    dim_ = static_cast<int>(points[0].size());
    std::vector<long long> c(dim_);
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
        for (int d = 0; d < dim_; ++d)
            c[d] = static_cast<long long>(std::floor(points[i][d] / cell_));
        cells_[key(c)].push_back(i);
    }
}

uint64_t SpatialGrid::key(const std::vector<long long>& c) const {
    uint64_t h = 0x12345678ULL;
    for (long long v : c) h = splitmix(h ^ static_cast<uint64_t>(v));
    return h;
}

std::vector<const std::vector<int>*> SpatialGrid::covering(
    const PointD& center, double radius) const {
    std::vector<const std::vector<int>*> out;
    if (empty()) return out;
    std::vector<long long> lo(dim_), hi(dim_), cur(dim_);
    for (int d = 0; d < dim_; ++d) {
        lo[d] = static_cast<long long>(std::floor((center[d] - radius) / cell_));
        hi[d] = static_cast<long long>(std::floor((center[d] + radius) / cell_));
    }
    cur = lo;
    while (true) {
        auto it = cells_.find(key(cur));
        if (it != cells_.end()) out.push_back(&it->second);
        int d = 0;
        for (; d < dim_; ++d) {
            if (++cur[d] <= hi[d]) break;
            cur[d] = lo[d];
        }
        if (d == dim_) break;
    }
    return out;
}

EpsGraph::EpsGraph(const SampledMap& f, const Rat& eps, const Metric& metric)
    : f_(&f), eps_(eps), eps_d_(to_double(eps)), metric_(&metric) {
    double r = metric.grid_radius(eps_d_);
    if (r > 0) {
        grid_ = SpatialGrid(f.net->points_d, r);
    } else {
        all_.resize(f.net->size());
        std::iota(all_.begin(), all_.end(), 0);
    }
}

bool EpsGraph::edge(int p, int q) const {
    return metric_->closer(f_->images[p], f_->images_d[p], f_->net->points[q],
                           f_->net->points_d[q], eps_, eps_d_);
}

std::vector<const std::vector<int>*> EpsGraph::candidate_lists(int p) const {
    if (!all_.empty()) return {&all_};
    return grid_.covering(f_->images_d[p], metric_->grid_radius(eps_d_) + 1e-9);
}

std::vector<int> EpsGraph::successors(int p) const {
    std::vector<int> out;
    for (const auto* lst : candidate_lists(p))
        for (int q : *lst)
            if (edge(p, q)) out.push_back(q);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Iterative Tarjan over lazily enumerated successors. Returns the SCC id of
// each node and marks self-loops.
void tarjan_scc(const EpsGraph& g, std::vector<int>& scc_id,
                std::vector<int>& scc_size, std::vector<char>& self_loop) {
    const int n = g.size();
    scc_id.assign(n, -1);
    self_loop.assign(n, 0);
    scc_size.clear();

    std::vector<int> index(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    stack.reserve(n);

    struct Frame {
        int v;
        std::vector<const std::vector<int>*> lists;
        size_t li = 0, mi = 0;
    };
    std::vector<Frame> frames;
    int next_index = 0;

    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        frames.push_back({root, g.candidate_lists(root)});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& fr = frames.back();
            int v = fr.v;
            int child = -1;
            while (fr.li < fr.lists.size()) {
                const auto& lst = *fr.lists[fr.li];
                if (fr.mi >= lst.size()) {
                    ++fr.li;
                    fr.mi = 0;
                    continue;
                }
                int w = lst[fr.mi++];
                if (!g.edge(v, w)) continue;
                if (w == v) self_loop[v] = 1;
                if (index[w] < 0) {
                    child = w;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (child >= 0) {
                frames.push_back({child, g.candidate_lists(child)});
                index[child] = low[child] = next_index++;
                stack.push_back(child);
                on_stack[child] = 1;
                continue;
            }
            // v exhausted
            if (low[v] == index[v]) {
                int id = static_cast<int>(scc_size.size());
                int count = 0;
                while (true) {
                    int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    scc_id[w] = id;
                    ++count;
                    if (w == v) break;
                }
                scc_size.push_back(count);
            }
            frames.pop_back();
            if (!frames.empty())
                low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
    }
}

std::vector<std::vector<int>> link_components(const std::vector<int>& idxs,
                                              const std::vector<PointD>& pts,
                                              double link, const Metric& metric) {
    const int m = static_cast<int>(idxs.size());
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    std::vector<PointD> sel(m);
    for (int i = 0; i < m; ++i) sel[i] = pts[idxs[i]];
    double r = metric.grid_radius(link);
    if (r > 0 && m > 64) {
        SpatialGrid grid(sel, r);
        for (int i = 0; i < m; ++i)
            grid.for_candidates(sel[i], r + 1e-9, [&](int j) {
                if (j > i && metric.dist(sel[i], sel[j]) <= link + 1e-12) unite(i, j);
            });
    } else {
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (metric.dist(sel[i], sel[j]) <= link + 1e-12) unite(i, j);
    }
    std::unordered_map<int, std::vector<int>> groups;
    for (int i = 0; i < m; ++i) groups[find(i)].push_back(idxs[i]);
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    std::sort(out.begin(), out.end());
    return out;
}

double component_diameter(const std::vector<int>& comp,
                          const std::vector<PointD>& pts, const Metric& metric) {
    double best = 0;
    for (size_t i = 0; i < comp.size(); ++i)
        for (size_t j = i + 1; j < comp.size(); ++j)
            best = std::max(best, metric.dist(pts[comp[i]], pts[comp[j]]));
    return best;
}

}  // namespace

CRReport cr_eps(const SampledMap& f, const Rat& eps, const CrOptions& opt) {
    const Rat& delta = f.net->delta;
    if (opt.enforce_eps_floor && eps < 3 * delta)
        throw EpsilonTooSmall("epsilon " + format_rat(eps) + " below 3*delta = " +
                              format_rat(3 * delta));

    EpsGraph g(f, eps, *opt.metric);
    std::vector<int> scc_id, scc_size;
    std::vector<char> self_loop;
    tarjan_scc(g, scc_id, scc_size, self_loop);

    CRReport rep;
    rep.epsilon = eps;
    rep.delta = delta;
    rep.in_cr.assign(g.size(), 0);
    for (int v = 0; v < g.size(); ++v) {
        if (scc_size[scc_id[v]] >= 2 || self_loop[v]) {
            rep.in_cr[v] = 1;
            rep.cr_points.push_back(v);
        }
    }
    if (!opt.stats) return rep;

    double link = opt.link_radius > 0 ? opt.link_radius : 2 * f.net->delta_d;
    rep.link_radius = link;
    rep.components = link_components(rep.cr_points, f.net->points_d, link, *opt.metric);
    rep.d1 = 0;
    for (const auto& comp : rep.components)
        rep.d1 = std::max(rep.d1, component_diameter(comp, f.net->points_d, *opt.metric));

    // eps-isolated CR points
    double r = opt.metric->grid_radius(to_double(eps));
    std::vector<PointD> crd;
    for (int v : rep.cr_points) crd.push_back(f.net->points_d[v]);
    SpatialGrid crgrid;
    if (r > 0) crgrid = SpatialGrid(crd, r);
    for (size_t i = 0; i < rep.cr_points.size(); ++i) {
        int v = rep.cr_points[i];
        bool found = false;
        auto consider = [&](size_t j) {
            if (found || j == i) return;
            int w = rep.cr_points[j];
            if (opt.metric->closer(f.net->points[v], f.net->points_d[v],
                                   f.net->points[w], f.net->points_d[w], eps,
                                   to_double(eps)))
                found = true;
        };
        if (r > 0)
            crgrid.for_candidates(crd[i], r + 1e-9, [&](int j) { consider(j); });
        else
            for (size_t j = 0; j < rep.cr_points.size(); ++j) consider(j);
        if (!found) rep.isolated.push_back(v);
    }

    if (opt.weights)
        rep.measure = measure_estimate(f, rep.cr_points, eps, *opt.weights, *opt.metric);
    return rep;
}

std::vector<int> brute_force_cycle_points(const SampledMap& f, const Rat& eps,
                                          const Metric& metric) {
    const int n = f.net->size();
    double eps_d = to_double(eps);
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            adj[p][q] = metric.closer(f.images[p], f.images_d[p], f.net->points[q],
                                      f.net->points_d[q], eps, eps_d);
    std::vector<int> out;
    for (int p = 0; p < n; ++p) {
        // reachability from successors of p back to p
        std::vector<char> seen(n, 0);
        std::vector<int> queue;
        for (int q = 0; q < n; ++q)
            if (adj[p][q] && !seen[q]) { seen[q] = 1; queue.push_back(q); }
        bool cyc = false;
        for (size_t h = 0; h < queue.size() && !cyc; ++h) {
            int u = queue[h];
            if (u == p) { cyc = true; break; }
            for (int q = 0; q < n; ++q)
                if (adj[u][q] && !seen[q]) { seen[q] = 1; queue.push_back(q); }
        }
        if (cyc || seen[p]) out.push_back(p);
    }
    return out;
}

std::optional<std::vector<int>> certify_non_recurrent(const SampledMap& f, int x,
                                                      const Rat& eps,
                                                      const Metric& metric) {
    if (x < 0 || x >= f.net->size())
        throw PointNotInNet("index " + std::to_string(x));
    EpsGraph g(f, eps, metric);
    std::vector<char> seen(g.size(), 0);
    std::vector<int> queue;
    for (int q : g.successors(x))
        if (!seen[q]) { seen[q] = 1; queue.push_back(q); }
    for (size_t h = 0; h < queue.size(); ++h) {
        if (queue[h] == x) return std::nullopt;
        for (int q : g.successors(queue[h]))
            if (!seen[q]) { seen[q] = 1; queue.push_back(q); }
    }
    if (seen[x]) return std::nullopt;
    std::sort(queue.begin(), queue.end());
    return queue;
}

double d1_estimate(const std::vector<PointD>& points, double link_radius,
                   const Metric& metric) {
    if (points.empty()) return 0;
    std::vector<int> idxs(points.size());
    std::iota(idxs.begin(), idxs.end(), 0);
    double best = 0;
    for (const auto& comp : link_components(idxs, points, link_radius, metric))
        best = std::max(best, component_diameter(comp, points, metric));
    return best;
}

double measure_estimate(const SampledMap& f, const std::vector<int>& subset,
                        const Rat& eps, const std::vector<double>& weights,
                        const Metric& metric) {
    const int n = f.net->size();
    double eps_d = to_double(eps);
    std::vector<char> marked(n, 0);
    double r = metric.grid_radius(eps_d);
    SpatialGrid grid;
    if (r > 0) grid = SpatialGrid(f.net->points_d, r);
    for (int v : subset) {
        auto mark = [&](int q) {
            if (marked[q]) return;
            if (metric.closer(f.net->points[v], f.net->points_d[v],
                              f.net->points[q], f.net->points_d[q], eps, eps_d))
                marked[q] = 1;
        };
        if (r > 0)
            grid.for_candidates(f.net->points_d[v], r + 1e-9, mark);
        else
            for (int q = 0; q < n; ++q) mark(q);
        marked[v] = 1;
    }
    double total = 0;
    for (int q = 0; q < n; ++q)
        if (marked[q]) total += weights[q];
    return total;
}

StabilityReport usc_stability_check(const SampledMap& f, const SampledMap& g,
                                    const Rat& eps, const Metric& metric) {
    StabilityReport rep;
    rep.shift = sup_dist_upper(f, g);
    CrOptions opt;
    opt.metric = &metric;
    opt.stats = false;
    auto crf = cr_eps(f, eps, opt);
    auto crg = cr_eps(g, eps + rep.shift, opt);
    for (int v : crf.cr_points)
        if (!crg.in_cr[v]) ++rep.violations;
    rep.holds = rep.violations == 0;
    return rep;
}

std::vector<int> fiber_components(const SampledMap& f,
                                  const std::vector<PointD>& targets,
                                  double a, const Rat& y_tol,
                                  const Metric& metric) {
    double tol_d = to_double(y_tol);
    double r = metric.grid_radius(tol_d);
    SpatialGrid tgrid;
    if (r > 0) tgrid = SpatialGrid(targets, r);
    std::vector<std::vector<int>> fibers(targets.size());
    for (int p = 0; p < f.net->size(); ++p) {
        auto add = [&](int y) {
            if (metric.dist(f.images_d[p], targets[y]) < tol_d) fibers[y].push_back(p);
        };
        if (r > 0)
            tgrid.for_candidates(f.images_d[p], r + 1e-9, add);
        else
            for (size_t y = 0; y < targets.size(); ++y) add(static_cast<int>(y));
    }
    std::vector<char> in_f(f.net->size(), 0);
    double link = f.net->delta_d;
    for (auto& fiber : fibers) {
        if (fiber.empty()) continue;
        for (const auto& comp : link_components(fiber, f.net->points_d, link, metric))
            if (component_diameter(comp, f.net->points_d, metric) >= a - 1e-12)
                for (int p : comp) in_f[p] = 1;
    }
    std::vector<int> out;
    for (int p = 0; p < f.net->size(); ++p)
        if (in_f[p]) out.push_back(p);
    return out;
}

}  // namespace chainrec
