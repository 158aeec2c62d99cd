#pragma once

#include "chainrec/errors.hpp"
#include "chainrec/geometry.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chainrec {

// Vertex-index tuple, sorted ascending.
using Simplex = std::vector<int>;

// A finite geometric simplicial complex. Immutable after construction;
// simplices are stored face-closed and ordered by (dimension, tuple).
class SimplicialComplex {
  public:
    // Builds the face closure of `maximal` over `vertices` and validates:
    // affine independence of every tuple, no duplicate vertex coordinates.
    static SimplicialComplex close_complex(const std::vector<Point>& vertices,
                                           const std::vector<Simplex>& maximal);

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_simplices() const { return static_cast<int>(simplices_.size()); }
    const Point& vertex(int i) const { return vertices_[i]; }
    const PointD& vertex_d(int i) const { return vertices_d_[i]; }
    const std::vector<Point>& vertices() const { return vertices_; }
    const Simplex& simplex(int id) const { return simplices_[id]; }
    const std::vector<Simplex>& simplices() const { return simplices_; }
    const std::vector<int>& maximal() const { return maximal_; }
    int dim() const { return dim_; }
    int ambient_dim() const { return ambient_dim_; }
    int simplex_dim(int id) const { return static_cast<int>(simplices_[id].size()) - 1; }

    // -1 when the tuple is not a simplex of the complex.
    int simplex_id(const Simplex& s) const;

    // Proper faces of a simplex (all nonempty strict subsets), as ids.
    std::vector<int> proper_faces(int id) const;
    // Simplices having `id` as a face (including `id` itself).
    const std::vector<int>& cofaces(int id) const { return cofaces_[id]; }

    Point barycenter(int id) const;

    Rat mesh2() const;       // squared mesh; EmptyComplex when no simplices
    double mesh() const;
    Rat diam2(int id) const; // squared diameter of one simplex

    SimplicialComplex skeleton(int i) const;

    struct Location {
        int simplex;              // carrier: minimal simplex containing x
        std::vector<Rat> bary;    // barycentric coords w.r.t. carrier, all > 0
    };
    std::optional<Location> locate(const Point& x) const;
    bool contains_point(const Point& x) const { return locate(x).has_value(); }

    Point point_at(const Location& loc) const;

    bool same_geometry(const SimplicialComplex& other) const;

    SimplicialComplex() = default;  // empty; populate via close_complex

  private:
    void finalize();

    std::vector<Point> vertices_;
    std::vector<PointD> vertices_d_;
    std::vector<Simplex> simplices_;
    std::map<Simplex, int> index_;
    std::vector<std::vector<int>> cofaces_;
    std::vector<int> maximal_;
    std::vector<std::pair<PointD, PointD>> bbox_;  // per maximal simplex
    int dim_ = -1;
    int ambient_dim_ = 0;
};

// Strictly descending face chain of a base complex; labels barycentric
// subdivision vertices.
struct FlagLabel {
    std::vector<int> chain;  // base simplex ids, chain[j+1] a proper face of chain[j]
};

// First barycentric subdivision with per-vertex provenance.
struct Subdivision {
    SimplicialComplex complex;           // K'
    std::vector<int> vertex_simplex;     // K'-vertex -> base simplex id
    std::vector<FlagLabel> vertex_labels;

    // The descending base chain of a K'-simplex.
    std::vector<int> chain_of(int kp_simplex, const SimplicialComplex& base) const;
};

Subdivision barycentric_subdivide(const SimplicialComplex& k);

// Star of a subcomplex: membership predicate plus covered simplices.
struct Star {
    const SimplicialComplex* complex;
    std::vector<bool> p_vertex;    // vertices of P
    std::vector<int> covered;      // simplices meeting |P|

    bool contains(const Point& x) const;
    bool simplex_covered(int id) const;
};

// `p_simplices`: simplex ids of K forming the subcomplex P.
Star star(const SimplicialComplex& k, const std::vector<int>& p_simplices);

}  // namespace chainrec
