#pragma once

#include "chainrec/simplicial_complex.hpp"

#include <memory>
#include <vector>

namespace chainrec {

using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

// Simplicial vertex assignment between complexes; induces a PL map |f|
// on the realizations.
struct VertexMap {
    ComplexPtr source;
    ComplexPtr target;
    std::vector<int> assignment;  // source vertex -> target vertex

    // Image tuple of a source simplex (deduplicated, sorted).
    Simplex image_tuple(int source_simplex) const;

    bool is_simplicial() const;
    void validate() const;  // FormatError / DegenerateSimplex on violation

    // PL evaluation: locate the carrier of x, push barycentric coordinates
    // through the assignment. Exact.
    Point evaluate(const Point& x) const;

    static VertexMap identity(const ComplexPtr& k);
    // outer(inner(x)); inner.target must realize the same complex as
    // outer.source.
    static VertexMap compose(const VertexMap& outer, const VertexMap& inner);
};

}  // namespace chainrec
