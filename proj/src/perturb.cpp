#include "chainrec/perturb.hpp"

#include "chainrec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace chainrec {

namespace {

// Exact orthogonal projection of y onto the simplex spanned by verts,
// clamped to nonnegative barycentric coordinates.
Point project_to_simplex(const std::vector<Point>& verts, const Point& y) {
    const int k = static_cast<int>(verts.size()) - 1;
    const int d = static_cast<int>(y.size());
    std::vector<Rat> b(k + 1, Rat(0));
    if (k == 0) {
        b[0] = 1;
    } else {
        // normal equations (V^T V) c = V^T (y - v0), V columns v_m - v0
        std::vector<std::vector<Rat>> a(k, std::vector<Rat>(k + 1, Rat(0)));
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j)
                for (int c = 0; c < d; ++c)
                    a[i][j] += (verts[i + 1][c] - verts[0][c]) *
                               (verts[j + 1][c] - verts[0][c]);
            for (int c = 0; c < d; ++c)
                a[i][k] += (verts[i + 1][c] - verts[0][c]) * (y[c] - verts[0][c]);
        }
        // Gaussian elimination with exact pivoting
        for (int col = 0; col < k; ++col) {
            int piv = -1;
            for (int row = col; row < k; ++row)
                if (a[row][col] != 0) { piv = row; break; }
            if (piv < 0) throw BlendEscapesComplex("projection basis degenerate");
            std::swap(a[col], a[piv]);
            for (int row = 0; row < k; ++row) {
                if (row == col || a[row][col] == 0) continue;
                Rat fac = a[row][col] / a[col][col];
                for (int c2 = col; c2 <= k; ++c2) a[row][c2] -= fac * a[col][c2];
            }
        }
        Rat sum = 0;
        for (int i = 0; i < k; ++i) {
            b[i + 1] = a[i][k] / a[i][i];
            sum += b[i + 1];
        }
        b[0] = 1 - sum;
        // clamp into the simplex
        Rat total = 0;
        for (auto& c : b) {
            if (c < 0) c = 0;
            total += c;
        }
        if (total == 0) throw BlendEscapesComplex("projection collapsed");
        for (auto& c : b) c /= total;
    }
    return convex_combination(verts, b);
}

// Incremental uniform grid for separation queries while carving cells.
class CenterGrid {
  public:
    CenterGrid(double cell, int dim) : cell_(cell), dim_(dim) {}
    void insert(const PointD& p, int idx) {
        cells_[key(p)].push_back(idx);
    }
    template <typename F>
    void neighbours(const PointD& p, F&& fn) const {
        std::vector<long long> lo(dim_), hi(dim_), cur(dim_);
        for (int d = 0; d < dim_; ++d) {
            lo[d] = static_cast<long long>(std::floor(p[d] / cell_)) - 1;
            hi[d] = lo[d] + 2;
        }
        cur = lo;
        while (true) {
            auto it = cells_.find(hash(cur));
            if (it != cells_.end())
                for (int i : it->second) fn(i);
            int d = 0;
            for (; d < dim_; ++d) {
                if (++cur[d] <= hi[d]) break;
                cur[d] = lo[d];
            }
            if (d == dim_) break;
        }
    }

  private:
    static uint64_t mix(uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }
    uint64_t hash(const std::vector<long long>& c) const {
        uint64_t h = 0xabcdef12ULL;
        for (long long v : c) h = mix(h ^ static_cast<uint64_t>(v));
        return h;
    }
    uint64_t key(const PointD& p) const {
        std::vector<long long> c(dim_);
        for (int d = 0; d < dim_; ++d)
            c[d] = static_cast<long long>(std::floor(p[d] / cell_));
        return hash(c);
    }
    double cell_;
    int dim_;
    std::unordered_map<uint64_t, std::vector<int>> cells_;
};

// Sampled local Lipschitz factor of f over net pairs within 2*delta.
double sampled_lipschitz(const SampledMap& f) {
    const Net& net = *f.net;
    double lip = 1.0;
    SpatialGrid grid(net.points_d, 2 * net.delta_d);
    for (int p = 0; p < net.size(); ++p)
        grid.for_candidates(net.points_d[p], 2 * net.delta_d + 1e-9, [&](int q) {
            if (q <= p) return;
            double dx = dist_d(net.points_d[p], net.points_d[q]);
            if (dx <= 0 || dx > 2 * net.delta_d + 1e-12) return;
            double dy = dist_d(f.images_d[p], f.images_d[q]);
            lip = std::max(lip, dy / dx);
        });
    return lip;
}

// Shortest lambda-cycle through x: BFS over the lazy eps-graph.
std::vector<int> lambda_cycle(const EpsGraph& g, int x) {
    if (g.has_self_loop(x)) return {x};
    const int n = g.size();
    std::vector<int> parent(n, -2);
    std::vector<int> queue;
    parent[x] = -1;
    queue.push_back(x);
    for (size_t h = 0; h < queue.size(); ++h) {
        int u = queue[h];
        for (int v : g.successors(u)) {
            if (v == x) {
                std::vector<int> path;
                for (int w = u; w != -1; w = parent[w]) path.push_back(w);
                std::reverse(path.begin(), path.end());
                return path;  // x, ..., u with an edge u -> x
            }
            if (parent[v] == -2) {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    return {};
}

}  // namespace

PerturbPlan make_plan(const SampledMap& f, const Rat& epsilon, int l,
                      std::uint64_t seed) {
    if (l < 2) throw BadParameter("period multiplier l must be >= 2");
    if (epsilon <= 0) throw BadParameter("epsilon must be positive");
    const Net& net = *f.net;
    PerturbPlan plan;
    plan.net = f.net;
    plan.epsilon = epsilon;
    plan.l = l;
    plan.seed = seed;
    plan.eta = epsilon / 7;

    double lip = sampled_lipschitz(f);
    plan.lambda = (plan.eta / 3) * Rat(99, 100) / rat_upper_bound(lip);
    if (plan.lambda < 3 * net.delta)
        throw ChainNotFound("lambda " + format_rat(plan.lambda) +
                            " is below the net resolution 3*delta");
    plan.delta_prime = Rat(3, 2) * plan.eta + 2 * net.delta;
    if (plan.delta_prime * 4 >= epsilon)
        throw BadParameter("net too coarse: delta' would reach epsilon/4");

    // eta-dense sites in cr_lambda(f) (every site then has a lambda-cycle)
    CrOptions opt;
    opt.stats = false;
    auto crl = cr_eps(f, plan.lambda, opt);
    if (crl.cr_points.empty()) throw ChainNotFound("cr_lambda(f) is empty");
    const double eta_d = to_double(plan.eta);
    std::mt19937_64 rng(seed);
    std::vector<double> mind(crl.cr_points.size(),
                             std::numeric_limits<double>::infinity());
    size_t first = rng() % crl.cr_points.size();
    size_t pick = first;
    while (true) {
        int site = crl.cr_points[pick];
        plan.sites.push_back(site);
        double far = 0;
        size_t arg = 0;
        for (size_t i = 0; i < crl.cr_points.size(); ++i) {
            mind[i] = std::min(
                mind[i], dist_d(net.points_d[crl.cr_points[i]], net.points_d[site]));
            if (mind[i] > far) { far = mind[i]; arg = i; }
        }
        if (far <= eta_d) break;
        pick = arg;
    }
    std::sort(plan.sites.begin(), plan.sites.end());

    EpsGraph lg(f, plan.lambda, EuclideanMetric::instance());
    for (int site : plan.sites) {
        auto chain = lambda_cycle(lg, site);
        if (chain.empty())
            throw ChainNotFound("site at net index " + std::to_string(site) +
                                " has no lambda-cycle");
        plan.chains.push_back(std::move(chain));
    }

    // carve cells: radius lambda/(4l), halve on collision, up to 8 retries
    Rat rho = plan.lambda / (4 * l);
    SpatialGrid netgrid(net.points_d, to_double(plan.lambda));
    for (int attempt = 0;; ++attempt) {
        plan.cells.clear();
        plan.cell_offset.clear();
        const Rat sep = 2 * rho + 4 * net.delta;
        const Rat sep2 = sep * sep;
        const Rat pool = plan.lambda - rho - 2 * net.delta;
        bool failed = pool <= 0;
        CenterGrid centers(std::max(to_double(sep), 1e-12), net.ambient_dim());
        std::vector<int> chosen;

        for (size_t i = 0; i < plan.sites.size() && !failed; ++i) {
            plan.cell_offset.push_back(static_cast<int>(plan.cells.size()));
            for (size_t j = 0; j < plan.chains[i].size() && !failed; ++j) {
                int node = plan.chains[i][j];
                // candidates: net points keeping the cell inside B_lambda(node)
                std::vector<std::pair<Rat, int>> cands;
                const Rat pool2 = pool * pool;
                netgrid.for_candidates(net.points_d[node],
                                       to_double(pool) + 1e-9, [&](int q) {
                    Rat d2 = dist2(net.points[q], net.points[node]);
                    if (d2 <= pool2) cands.emplace_back(d2, q);
                });
                std::sort(cands.begin(), cands.end());
                int placed = 0;
                for (auto& [d2, q] : cands) {
                    if (placed == l) break;
                    bool clash = false;
                    centers.neighbours(net.points_d[q], [&](int c) {
                        if (!clash &&
                            dist2(net.points[q], net.points[c]) <= sep2)
                            clash = true;
                    });
                    if (clash) continue;
                    PerturbCell cell;
                    cell.site = static_cast<int>(i);
                    cell.node = static_cast<int>(j);
                    cell.r = placed;
                    cell.center = q;
                    plan.cells.push_back(cell);
                    centers.insert(net.points_d[q], q);
                    chosen.push_back(q);
                    ++placed;
                }
                if (placed < l) failed = true;
            }
        }
        if (!failed) break;
        if (attempt == 8)
            throw CellsCollide("could not carve disjoint cells after 8 halvings");
        rho /= 2;
    }
    plan.radius = rho;
    plan.beta_max = rho;

    // members: net ball of radius rho around each centre
    const Rat rho2 = rho * rho;
    for (auto& cell : plan.cells) {
        netgrid.for_candidates(net.points_d[cell.center],
                               to_double(rho) + 1e-9, [&](int q) {
            if (dist2(net.points[q], net.points[cell.center]) <= rho2)
                cell.members.push_back(q);
        });
        std::sort(cell.members.begin(), cell.members.end());
    }
    return plan;
}

PerturbedMap build_perturbation(const SampledMap& f, const PerturbPlan& plan) {
    const Net& net = *f.net;
    if (plan.net->size() != net.size())
        throw BadParameter("plan was made for a different net");
    const int n = net.size();

    std::vector<int> cellof(n, -1);
    for (size_t c = 0; c < plan.cells.size(); ++c)
        for (int u : plan.cells[c].members) cellof[u] = static_cast<int>(c);

    // flat list of chain nodes for the annulus search
    struct NodeRef { int site, node, point; };
    std::vector<NodeRef> nodes;
    std::vector<PointD> node_pts;
    for (size_t i = 0; i < plan.chains.size(); ++i)
        for (size_t j = 0; j < plan.chains[i].size(); ++j) {
            nodes.push_back({static_cast<int>(i), static_cast<int>(j),
                             plan.chains[i][j]});
            node_pts.push_back(net.points_d[plan.chains[i][j]]);
        }
    SpatialGrid node_grid(node_pts, to_double(plan.lambda));
    const Rat lam2 = plan.lambda * plan.lambda;
    const double lam_d = to_double(plan.lambda);

    std::vector<Point> images(n);
    for (int p = 0; p < n; ++p) {
        if (cellof[p] >= 0) {
            int nxt = plan.next_cell(cellof[p]);
            images[p] = net.points[plan.cells[nxt].center];
            continue;
        }
        // nearest chain node within lambda, if any
        int best = -1;
        Rat best2;
        node_grid.for_candidates(net.points_d[p], lam_d + 1e-9, [&](int ni) {
            Rat d2 = dist2(net.points[p], net.points[nodes[ni].point]);
            if (d2 < lam2 && (best < 0 || d2 < best2)) { best = ni; best2 = d2; }
        });
        if (best < 0) {
            images[p] = f.images[p];
            continue;
        }
        const NodeRef& nd = nodes[best];
        // blend toward the successor centre of the nearest cell of this node
        int rbest = 0;
        Rat rd2;
        for (int r = 0; r < plan.l; ++r) {
            int c = plan.cell_at(nd.site, nd.node, r);
            Rat d2 = dist2(net.points[p], net.points[plan.cells[c].center]);
            if (r == 0 || d2 < rd2) { rd2 = d2; rbest = r; }
        }
        int tcell = plan.next_cell(plan.cell_at(nd.site, nd.node, rbest));
        const Point& t = net.points[plan.cells[tcell].center];

        double rr = dist_d(net.points_d[p], net.points_d[nd.point]);
        double wd = std::clamp((lam_d - rr) / lam_d, 0.0, 1.0);
        Rat w = rat_from_double(wd);
        if (w < 0) w = 0;
        if (w > 1) w = 1;
        Point y(net.points[p].size());
        for (size_t c = 0; c < y.size(); ++c)
            y[c] = (1 - w) * f.images[p][c] + w * t[c];
        if (net.complex && !net.complex->contains_point(y)) {
            if (net.carriers.empty())
                throw BlendEscapesComplex("no carrier data at net point " +
                                          std::to_string(p));
            const auto& loc = net.carriers[plan.cells[tcell].center];
            std::vector<Point> verts;
            for (int v : net.complex->simplex(loc.simplex))
                verts.push_back(net.complex->vertex(v));
            y = project_to_simplex(verts, y);
        }
        images[p] = std::move(y);
    }

    PerturbedMap pm;
    pm.plan = plan;
    pm.g_prime = SampledMap::from_images(f.net, std::move(images));
    pm.certified_dist = sup_dist_upper(f, pm.g_prime);
    if (pm.certified_dist >= plan.delta_prime)
        throw PremiseViolated("perturbation drifted to " +
                              format_rat(pm.certified_dist) +
                              ", beyond delta' = " +
                              format_rat(plan.delta_prime));

    // designated orbits: one per (site, r), following the wrap rule
    for (size_t i = 0; i < plan.sites.size(); ++i)
        for (int r = 0; r < plan.l; ++r) {
            int start = plan.cell_at(static_cast<int>(i), 0, r);
            std::vector<int> orbit;
            int c = start;
            do {
                orbit.push_back(plan.cells[c].center);
                c = plan.next_cell(c);
            } while (c != start &&
                     orbit.size() <= plan.cells.size());
            pm.designated_orbits.push_back(std::move(orbit));
        }
    return pm;
}

DensityReport verify_density(const PerturbedMap& pm, const Rat& epsilon,
                             const Metric& metric) {
    const Net& net = *pm.g_prime.net;
    CrOptions opt;
    opt.metric = &metric;
    opt.stats = false;
    auto rep = cr_eps(pm.g_prime, epsilon, opt);

    DensityReport out;
    out.cr_size = static_cast<int>(rep.cr_points.size());
    const double eps_d = to_double(epsilon);
    for (int x : rep.cr_points) {
        double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
        for (const auto& cell : pm.plan.cells) {
            double d = metric.dist(net.points_d[x], net.points_d[cell.center]);
            if (d < d1) { d2 = d1; d1 = d; }
            else if (d < d2) { d2 = d; }
        }
        if (!(d2 < eps_d)) ++out.failures;
        if (d2 > out.worst_second &&
            d2 < std::numeric_limits<double>::infinity())
            out.worst_second = d2;
    }
    out.pass = out.failures == 0;
    return out;
}

RobustnessReport verify_robustness(const PerturbedMap& pm, const Rat& beta,
                                   int trials, std::uint64_t seed) {
    if (beta <= 0) throw BadParameter("beta must be positive");
    if (beta >= pm.plan.beta_max)
        throw BetaTooLarge("beta " + format_rat(beta) +
                           " reaches the certified gap " +
                           format_rat(pm.plan.beta_max));
    const Net& net = *pm.g_prime.net;
    const int dim = net.ambient_dim();
    const Rat rad2 = pm.plan.radius * pm.plan.radius;
    const double beta_d = to_double(beta);
    const double eps_d = to_double(pm.plan.epsilon);

    RobustnessReport out;
    out.trials = trials;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (t + 1));
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        auto noise = [&]() {
            PointD v(dim);
            double norm2 = 0;
            for (double& c : v) { c = uni(rng); norm2 += c * c; }
            double norm = std::sqrt(norm2);
            Point out_v(dim, Rat(0));
            if (norm == 0) return out_v;
            double mag = uni(rng) * 0.5 + 0.5;  // uniform in [0, 1]
            double scale = beta_d * 0.99 * mag / norm;
            for (int c = 0; c < dim; ++c) out_v[c] = rat_from_double(v[c] * scale);
            return out_v;
        };
        for (size_t c = 0; c < pm.plan.cells.size(); ++c) {
            int nxt = pm.plan.next_cell(static_cast<int>(c));
            const Point& target = net.points[pm.plan.cells[nxt].center];
            for (int u : pm.plan.cells[c].members) {
                Point hu = pm.g_prime.images[u];
                Point nv = noise();
                for (int d = 0; d < dim; ++d) hu[d] += nv[d];
                Rat d2 = dist2(hu, target);
                double dd = std::sqrt(to_double(d2));
                out.worst_step = std::max(out.worst_step, dd);
                if (d2 >= rad2) ++out.step_violations;
                // centre cycle: the eps-chain edge through this cell's centre
                if (u == pm.plan.cells[c].center && !(dd < eps_d))
                    ++out.cr_cell_misses;
            }
        }
    }
    out.pass = out.step_violations == 0 && out.cr_cell_misses == 0;
    return out;
}

}  // namespace chainrec
