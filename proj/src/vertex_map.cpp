#include "chainrec/vertex_map.hpp"

#include <algorithm>

namespace chainrec {

Simplex VertexMap::image_tuple(int source_simplex) const {
    Simplex out;
    for (int v : source->simplex(source_simplex)) out.push_back(assignment[v]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool VertexMap::is_simplicial() const {
    if (static_cast<int>(assignment.size()) != source->num_vertices()) return false;
    for (int a : assignment)
        if (a < 0 || a >= target->num_vertices()) return false;
    for (int id = 0; id < source->num_simplices(); ++id)
        if (target->simplex_id(image_tuple(id)) < 0) return false;
    return true;
}

void VertexMap::validate() const {
    if (static_cast<int>(assignment.size()) != source->num_vertices())
        throw FormatError("assignment length does not match source vertices");
    for (int a : assignment)
        if (a < 0 || a >= target->num_vertices())
            throw FormatError("assignment references missing target vertex");
    for (int id = 0; id < source->num_simplices(); ++id)
        if (target->simplex_id(image_tuple(id)) < 0)
            throw DegenerateSimplex("vertex map is not simplicial on simplex id " +
                                    std::to_string(id));
}

Point VertexMap::evaluate(const Point& x) const {
    auto loc = source->locate(x);
    if (!loc) throw PointOutsideComplex("PL evaluation outside |source|");
    const Simplex& s = source->simplex(loc->simplex);
    std::vector<Point> image_pts;
    image_pts.reserve(s.size());
    for (int v : s) image_pts.push_back(target->vertex(assignment[v]));
    return convex_combination(image_pts, loc->bary);
}

VertexMap VertexMap::identity(const ComplexPtr& k) {
    VertexMap m{k, k, {}};
    m.assignment.resize(k->num_vertices());
    for (int i = 0; i < k->num_vertices(); ++i) m.assignment[i] = i;
    return m;
}

VertexMap VertexMap::compose(const VertexMap& outer, const VertexMap& inner) {
    if (!inner.target->same_geometry(*outer.source))
        throw FormatError("composition: inner target differs from outer source");
    VertexMap m{inner.source, outer.target, {}};
    m.assignment.resize(inner.assignment.size());
    for (size_t i = 0; i < inner.assignment.size(); ++i)
        m.assignment[i] = outer.assignment[inner.assignment[i]];
    return m;
}

}  // namespace chainrec
