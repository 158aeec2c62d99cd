#include "chainrec/crush.hpp"

#include "chainrec/engine.hpp"
#include "chainrec/errors.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace chainrec {

CrushPair crush_vertex_map(const ComplexPtr& k) {
    CrushPair out;
    out.base = k;
    out.first = barycentric_subdivide(*k);
    out.kp = std::make_shared<SimplicialComplex>(out.first.complex);
    out.second = barycentric_subdivide(*out.kp);
    out.kpp = std::make_shared<SimplicialComplex>(out.second.complex);

    VertexMap g{out.kpp, out.kp, {}};
    g.assignment.resize(out.kpp->num_vertices());
    for (int u = 0; u < out.kpp->num_vertices(); ++u) {
        // K''-vertex u is the barycenter of the K'-simplex with id u, whose
        // descending chain of base simplices ends at the smallest S_k; the
        // image is b(S_k), i.e. the K'-vertex indexed by that base simplex.
        auto chain = out.first.chain_of(u, *k);
        g.assignment[u] = chain.back();
    }
    g.validate();
    out.g = std::move(g);
    return out;
}

void TrapChain::validate() const {
    if (opens.size() != closeds.size() || opens.empty())
        throw BadParameter("trap chain must have matching nonempty families");
    const int n = net->size();
    for (int i = 0; i < levels(); ++i) {
        if (static_cast<int>(opens[i].size()) != n ||
            static_cast<int>(closeds[i].size()) != n)
            throw BadParameter("trap chain indicator size mismatch");
        for (int p = 0; p < n; ++p) {
            if (i + 1 < levels() && opens[i][p] && !opens[i + 1][p])
                throw BadParameter("U_i not nested at level " + std::to_string(i));
            if (i + 1 < levels() && closeds[i][p] && !closeds[i + 1][p])
                throw BadParameter("K_i not nested at level " + std::to_string(i));
            if (closeds[i][p] && !opens[i][p])
                throw BadParameter("K_" + std::to_string(i) +
                                   " escapes U_" + std::to_string(i) +
                                   " at net point " + std::to_string(p));
        }
    }
}

TrapChain skeleton_trap_chain(const CrushPair& pair, const NetPtr& net) {
    const SimplicialComplex& base = *pair.base;
    const SimplicialComplex& kp = *pair.kp;
    const SimplicialComplex& kpp = *pair.kpp;
    const int n = base.dim();

    // K''-vertices that are barycenters b(S) of base simplices: exactly those
    // labelled by a 0-dimensional K'-simplex. qual = dim S, else unbounded.
    std::vector<int> qual(kpp.num_vertices(), INT_MAX);
    for (int u = 0; u < kpp.num_vertices(); ++u)
        if (kp.simplex_dim(u) == 0)
            qual[u] = base.simplex_dim(kp.simplex(u)[0]);

    // Smallest level whose star union covers a K''-simplex / its closure.
    std::vector<int> own(kpp.num_simplices(), INT_MAX);
    std::vector<int> wbar(kpp.num_simplices(), INT_MAX);
    for (int c = 0; c < kpp.num_simplices(); ++c)
        for (int v : kpp.simplex(c)) own[c] = std::min(own[c], qual[v]);
    for (int c = 0; c < kpp.num_simplices(); ++c)
        for (int cf : kpp.cofaces(c)) wbar[c] = std::min(wbar[c], own[cf]);

    std::vector<int> level(net->size());
    for (int p = 0; p < net->size(); ++p) {
        auto loc = kpp.locate(net->points[p]);
        if (!loc) throw PointOutsideComplex("net point outside |K''|");
        level[p] = wbar[loc->simplex];
    }

    // Interior at net scale: the level of a point is pushed up to the worst
    // level among neighbours within 2*delta.
    std::vector<int> nb_level = level;
    const Rat nb2 = 4 * net->delta * net->delta;
    SpatialGrid grid(net->points_d, 2 * net->delta_d);
    for (int p = 0; p < net->size(); ++p)
        grid.for_candidates(net->points_d[p], 2 * net->delta_d + 1e-9, [&](int q) {
            if (q != p && dist2(net->points[p], net->points[q]) <= nb2)
                nb_level[p] = std::max(nb_level[p], level[q]);
        });

    TrapChain ch;
    ch.net = net;
    ch.opens.assign(n + 1, std::vector<char>(net->size(), 0));
    ch.closeds.assign(n + 1, std::vector<char>(net->size(), 0));
    for (int p = 0; p < net->size(); ++p) {
        int cdim = base.simplex_dim(net->carriers[p].simplex);
        for (int i = 0; i <= n; ++i) {
            if (nb_level[p] <= i) ch.opens[i][p] = 1;
            if (cdim <= i) ch.closeds[i][p] = 1;
        }
    }
    ch.validate();
    return ch;
}

std::vector<int> trap_filter(const SampledMap& f, const TrapChain& chain,
                             const Rat& eps) {
    chain.validate();
    if (eps <= 0) throw BadParameter("epsilon must be positive");
    const Net& net = *chain.net;
    if (f.net->size() != net.size())
        throw BadParameter("trap chain built on a different net");
    const Rat d2 = net.delta * net.delta;
    const double dd = net.delta_d + 1e-9;
    const Rat fat = eps + net.delta;
    const Rat fat2 = fat * fat;
    const double fatd = to_double(fat) + 1e-9;

    // fattened[i][p]: p within eps+delta of K_i
    std::vector<std::vector<char>> fattened(chain.levels(),
                                            std::vector<char>(net.size(), 0));
    for (int i = 0; i < chain.levels(); ++i) {
        std::vector<int> ki;
        for (int q = 0; q < net.size(); ++q)
            if (chain.closeds[i][q]) ki.push_back(q);

        for (int p = 0; p < net.size(); ++p) {
            if (chain.closeds[i][p]) { fattened[i][p] = 1; continue; }
            for (int q : ki) {
                if (dist_d(net.points_d[p], net.points_d[q]) > fatd) continue;
                if (dist2(net.points[p], net.points[q]) <= fat2) {
                    fattened[i][p] = 1;
                    break;
                }
            }
        }

        for (int p = 0; p < net.size(); ++p) {
            // (b) absorption: the fattening must stay inside U_i
            if (fattened[i][p] && !chain.opens[i][p])
                throw PremiseViolated("the (eps+delta)-hull of K_" +
                                      std::to_string(i) + " escapes U_" +
                                      std::to_string(i) + " at net point " +
                                      std::to_string(p));
            if (!chain.opens[i][p]) continue;
            // (a) mapping: f(U_i) within delta of K_i
            bool near = false;
            for (int q : ki) {
                if (dist_d(f.images_d[p], net.points_d[q]) > dd) continue;
                if (dist2(f.images[p], net.points[q]) <= d2) { near = true; break; }
            }
            if (!near)
                throw PremiseViolated("f(U_" + std::to_string(i) +
                                      ") leaves the delta-hull of K_" +
                                      std::to_string(i) + " at net point " +
                                      std::to_string(p));
        }
    }

    const int n = chain.levels() - 1;
    std::vector<int> out;
    for (int p = 0; p < net.size(); ++p) {
        bool in = !chain.opens[n][p] || fattened[0][p];
        for (int i = 1; i <= n && !in; ++i)
            in = fattened[i][p] && !chain.opens[i - 1][p];
        if (in) out.push_back(p);
    }
    return out;
}

VertexMap skeleton_compress(const ComplexPtr& lk, const VertexMap& f,
                            CrushPair* out_pair) {
    CrushPair pair = crush_vertex_map(lk);
    if (!pair.kp->same_geometry(*f.source))
        throw SubcomplexMismatch(
            "map is not defined on the first subdivision of the given complex");
    VertexMap h = VertexMap::compose(f, pair.g);
    if (out_pair) *out_pair = std::move(pair);
    return h;
}

namespace {

// Vertex set of the carrier of x in k; throws when x leaves |k|.
std::vector<int> carrier_vertices(const SimplicialComplex& k, const Point& x,
                                  const char* what) {
    auto loc = k.locate(x);
    if (!loc) throw PremiseViolated(std::string(what) + " leaves the polyhedron");
    return k.simplex(loc->simplex);
}

}  // namespace

PipelineResult poly_pipeline(const ComplexPtr& l, const SampledMap& F,
                             const Rat& epsilon, int max_depth) {
    if (epsilon <= 0) throw BadParameter("epsilon must be positive");
    if (l->mesh2() >= epsilon * epsilon)
        throw BadParameter("mesh(L) must be below epsilon");

    const int nv = l->num_vertices();
    const int n = F.net->size();
    // L-vertices whose closed star holds each sampled image.
    std::vector<std::vector<int>> img_verts(n);
    for (int p = 0; p < n; ++p)
        img_verts[p] = carrier_vertices(*l, F.images[p], "sampled image");

    ComplexPtr cur = l;  // L^(k)
    for (int depth = 0; depth <= max_depth; ++depth) {
        auto sub = barycentric_subdivide(*cur);
        auto src = std::make_shared<SimplicialComplex>(sub.complex);  // L^(k+1)

        // Star condition: candidate target vertices per source vertex are
        // the L-vertices w with F(net cap st(v)) inside st(w).
        std::vector<std::vector<char>> cand(src->num_vertices(),
                                            std::vector<char>(nv, 1));
        std::vector<char> touched(src->num_vertices(), 0);
        for (int p = 0; p < n; ++p) {
            auto cv = carrier_vertices(*src, F.net->points[p], "net point");
            for (int v : cv) {
                touched[v] = 1;
                for (int w = 0; w < nv; ++w)
                    cand[v][w] = cand[v][w] &&
                                 std::find(img_verts[p].begin(), img_verts[p].end(),
                                           w) != img_verts[p].end();
            }
        }
        std::vector<int> assign(src->num_vertices(), -1);
        bool ok = true;
        for (int v = 0; v < src->num_vertices() && ok; ++v) {
            if (!touched[v]) {
                // no net point in this star: borrow the nearest sample's set
                double best = 1e300;
                int bp = 0;
                for (int p = 0; p < n; ++p) {
                    double d = dist_d(src->vertex_d(v), F.net->points_d[p]);
                    if (d < best) { best = d; bp = p; }
                }
                assign[v] = img_verts[bp].front();
                continue;
            }
            ok = false;
            for (int w = 0; w < nv; ++w)
                if (cand[v][w]) { assign[v] = w; ok = true; break; }
        }
        if (ok) {
            VertexMap f0{src, l, assign};
            if (f0.is_simplicial()) {
                PipelineResult res;
                res.f = f0;
                res.depth = depth;
                res.mesh2_l = l->mesh2();
                res.h = skeleton_compress(cur, f0);
                res.h_sampled = sample_vertex_map(F.net, res.h);
                res.sup_dist_fh = sup_dist_upper(F, res.h_sampled);
                return res;
            }
        }
        cur = src;
    }
    throw ApproximationFailed("no simplicial approximation up to depth " +
                              std::to_string(max_depth + 1));
}

}  // namespace chainrec
