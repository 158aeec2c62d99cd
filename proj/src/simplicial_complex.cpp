#include "chainrec/simplicial_complex.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace chainrec {

namespace {

std::vector<Simplex> nonempty_subsets(const Simplex& s) {
    std::vector<Simplex> out;
    const int n = static_cast<int>(s.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        Simplex sub;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) sub.push_back(s[i]);
        out.push_back(std::move(sub));
    }
    return out;
}

}  // namespace

SimplicialComplex SimplicialComplex::close_complex(
    const std::vector<Point>& vertices, const std::vector<Simplex>& maximal) {
    SimplicialComplex k;
    k.vertices_ = vertices;
    if (!vertices.empty()) k.ambient_dim_ = static_cast<int>(vertices[0].size());
    for (const auto& v : vertices)
        if (static_cast<int>(v.size()) != k.ambient_dim_)
            throw FormatError("inconsistent vertex dimensions");
    for (size_t i = 0; i < vertices.size(); ++i)
        for (size_t j = i + 1; j < vertices.size(); ++j)
            if (vertices[i] == vertices[j])
                throw DuplicateVertex("vertices " + std::to_string(i) + " and " +
                                      std::to_string(j) + " coincide");

    std::set<Simplex> closed;
    for (const auto& raw : maximal) {
        Simplex s = raw;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw DegenerateSimplex("repeated vertex index in simplex");
        for (int idx : s)
            if (idx < 0 || idx >= k.num_vertices())
                throw FormatError("simplex references missing vertex " +
                                  std::to_string(idx));
        std::vector<Point> pts;
        for (int idx : s) pts.push_back(vertices[idx]);
        if (!affinely_independent(pts))
            throw DegenerateSimplex("affinely dependent vertex set");
        for (auto& f : nonempty_subsets(s)) closed.insert(std::move(f));
    }
    k.simplices_.assign(closed.begin(), closed.end());
    k.finalize();
    return k;
}

void SimplicialComplex::finalize() {
    std::sort(simplices_.begin(), simplices_.end(),
              [](const Simplex& a, const Simplex& b) {
                  if (a.size() != b.size()) return a.size() < b.size();
                  return a < b;
              });
    index_.clear();
    dim_ = -1;
    for (int i = 0; i < num_simplices(); ++i) {
        index_[simplices_[i]] = i;
        dim_ = std::max(dim_, simplex_dim(i));
    }
    vertices_d_.resize(vertices_.size());
    for (size_t i = 0; i < vertices_.size(); ++i)
        vertices_d_[i] = to_double(vertices_[i]);

    cofaces_.assign(num_simplices(), {});
    std::vector<bool> is_max(num_simplices(), true);
    for (int i = 0; i < num_simplices(); ++i) {
        for (auto& f : nonempty_subsets(simplices_[i])) {
            auto it = index_.find(f);
            if (it == index_.end()) continue;
            cofaces_[it->second].push_back(i);
            if (it->second != i) is_max[it->second] = false;
        }
    }
    maximal_.clear();
    bbox_.clear();
    for (int i = 0; i < num_simplices(); ++i) {
        if (!is_max[i]) continue;
        maximal_.push_back(i);
        PointD lo(ambient_dim_, 1e300), hi(ambient_dim_, -1e300);
        for (int v : simplices_[i])
            for (int c = 0; c < ambient_dim_; ++c) {
                lo[c] = std::min(lo[c], vertices_d_[v][c]);
                hi[c] = std::max(hi[c], vertices_d_[v][c]);
            }
        bbox_.emplace_back(std::move(lo), std::move(hi));
    }
}

int SimplicialComplex::simplex_id(const Simplex& s) const {
    auto it = index_.find(s);
    return it == index_.end() ? -1 : it->second;
}

std::vector<int> SimplicialComplex::proper_faces(int id) const {
    std::vector<int> out;
    for (auto& f : nonempty_subsets(simplices_[id])) {
        if (f.size() == simplices_[id].size()) continue;
        int fid = simplex_id(f);
        if (fid >= 0) out.push_back(fid);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Point SimplicialComplex::barycenter(int id) const {
    const Simplex& s = simplices_[id];
    Point b(ambient_dim_, Rat(0));
    for (int v : s)
        for (int c = 0; c < ambient_dim_; ++c) b[c] += vertices_[v][c];
    Rat n(static_cast<int>(s.size()));
    for (auto& c : b) c /= n;
    return b;
}

Rat SimplicialComplex::diam2(int id) const {
    const Simplex& s = simplices_[id];
    Rat best = 0;
    for (size_t i = 0; i < s.size(); ++i)
        for (size_t j = i + 1; j < s.size(); ++j)
            best = std::max(best, dist2(vertices_[s[i]], vertices_[s[j]]));
    return best;
}

Rat SimplicialComplex::mesh2() const {
    if (simplices_.empty()) throw EmptyComplex("mesh of empty complex");
    Rat best = 0;
    for (int id : maximal_) best = std::max(best, diam2(id));
    return best;
}

double SimplicialComplex::mesh() const { return std::sqrt(to_double(mesh2())); }

SimplicialComplex SimplicialComplex::skeleton(int i) const {
    if (i < 0) throw BadParameter("skeleton index must be nonnegative");
    SimplicialComplex out;
    out.vertices_ = vertices_;
    out.ambient_dim_ = ambient_dim_;
    for (const auto& s : simplices_)
        if (static_cast<int>(s.size()) - 1 <= i) out.simplices_.push_back(s);
    out.finalize();
    return out;
}

std::optional<SimplicialComplex::Location> SimplicialComplex::locate(
    const Point& x) const {
    PointD xd = to_double(x);
    for (size_t mi = 0; mi < maximal_.size(); ++mi) {
        const auto& [lo, hi] = bbox_[mi];
        bool in_box = true;
        for (int c = 0; c < ambient_dim_; ++c)
            if (xd[c] < lo[c] - 1e-9 || xd[c] > hi[c] + 1e-9) { in_box = false; break; }
        if (!in_box) continue;
        int id = maximal_[mi];
        const Simplex& s = simplices_[id];
        std::vector<Point> pts;
        pts.reserve(s.size());
        for (int v : s) pts.push_back(vertices_[v]);
        auto bary = barycentric(pts, x);
        if (!bary) continue;
        bool inside = true;
        for (const Rat& b : *bary)
            if (b < 0) { inside = false; break; }
        if (!inside) continue;
        // Carrier = face spanned by the strictly positive coordinates.
        Simplex face;
        std::vector<Rat> face_bary;
        for (size_t i = 0; i < s.size(); ++i) {
            if ((*bary)[i] > 0) {
                face.push_back(s[i]);
                face_bary.push_back((*bary)[i]);
            }
        }
        int fid = simplex_id(face);
        if (fid < 0) continue;  // cannot happen in a face-closed complex
        return Location{fid, std::move(face_bary)};
    }
    return std::nullopt;
}

Point SimplicialComplex::point_at(const Location& loc) const {
    const Simplex& s = simplices_[loc.simplex];
    std::vector<Point> pts;
    for (int v : s) pts.push_back(vertices_[v]);
    return convex_combination(pts, loc.bary);
}

bool SimplicialComplex::same_geometry(const SimplicialComplex& other) const {
    return vertices_ == other.vertices_ && simplices_ == other.simplices_;
}

Subdivision barycentric_subdivide(const SimplicialComplex& k) {
    Subdivision out;
    const int n = k.num_simplices();
    std::vector<Point> verts(n);
    for (int i = 0; i < n; ++i) verts[i] = k.barycenter(i);

    // All strictly descending face chains; every subset of a chain is again
    // a chain, so enumerating them all yields a face-closed simplex list.
    std::vector<std::vector<int>> faces(n);
    for (int i = 0; i < n; ++i) faces[i] = k.proper_faces(i);
    std::vector<Simplex> chains;
    std::vector<int> cur;
    auto extend = [&](auto&& self, int s) -> void {
        cur.push_back(s);
        Simplex tuple = cur;
        std::sort(tuple.begin(), tuple.end());
        chains.push_back(std::move(tuple));
        for (int f : faces[s]) self(self, f);
        cur.pop_back();
    };
    for (int i = 0; i < n; ++i) extend(extend, i);

    // Keep only maximal chains as generators; closure rebuilds the rest.
    out.complex = SimplicialComplex::close_complex(verts, chains);
    out.vertex_simplex.resize(n);
    out.vertex_labels.resize(n);
    for (int i = 0; i < n; ++i) {
        out.vertex_simplex[i] = i;  // K'-vertex i is b(K-simplex i)
        out.vertex_labels[i] = FlagLabel{{i}};
    }
    return out;
}

std::vector<int> Subdivision::chain_of(int kp_simplex,
                                       const SimplicialComplex& base) const {
    const Simplex& s = complex.simplex(kp_simplex);
    std::vector<int> chain;
    for (int v : s) chain.push_back(vertex_simplex[v]);
    std::sort(chain.begin(), chain.end(), [&](int a, int b) {
        return base.simplex(a).size() > base.simplex(b).size();
    });
    return chain;
}

Star star(const SimplicialComplex& k, const std::vector<int>& p_simplices) {
    Star st;
    st.complex = &k;
    st.p_vertex.assign(k.num_vertices(), false);
    for (int id : p_simplices) {
        if (id < 0 || id >= k.num_simplices())
            throw SubcomplexMismatch("simplex id " + std::to_string(id) +
                                     " not in complex");
        for (int v : k.simplex(id)) st.p_vertex[v] = true;
    }
    for (int id = 0; id < k.num_simplices(); ++id) {
        bool meets = false;
        for (int v : k.simplex(id))
            if (st.p_vertex[v]) { meets = true; break; }
        if (meets) st.covered.push_back(id);
    }
    return st;
}

bool Star::contains(const Point& x) const {
    auto loc = complex->locate(x);
    if (!loc) return false;
    for (int v : complex->simplex(loc->simplex))
        if (p_vertex[v]) return true;
    return false;
}

bool Star::simplex_covered(int id) const {
    for (int v : complex->simplex(id))
        if (p_vertex[v]) return true;
    return false;
}

}  // namespace chainrec
