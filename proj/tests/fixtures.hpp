#pragma once

#include "chainrec/net.hpp"
#include "chainrec/simplicial_complex.hpp"

#include <memory>

namespace chainrec::fixtures {

inline Point pt(std::initializer_list<Rat> cs) { return Point(cs); }

// [0,1] split into n segments.
inline ComplexPtr interval(int n) {
    std::vector<Point> verts;
    std::vector<Simplex> maximal;
    for (int i = 0; i <= n; ++i) verts.push_back({Rat(i, n)});
    for (int i = 0; i < n; ++i) maximal.push_back({i, i + 1});
    return std::make_shared<SimplicialComplex>(
        SimplicialComplex::close_complex(verts, maximal));
}

// Standard 2-simplex (0,0),(1,0),(0,1).
inline ComplexPtr unit_triangle() {
    std::vector<Point> verts = {{0, 0}, {1, 0}, {0, 1}};
    return std::make_shared<SimplicialComplex>(
        SimplicialComplex::close_complex(verts, {{0, 1, 2}}));
}

// [0,2] x [0,1] as two triangles; mesh^2 = 5.
inline ComplexPtr rectangle() {
    std::vector<Point> verts = {{0, 0}, {2, 0}, {2, 1}, {0, 1}};
    return std::make_shared<SimplicialComplex>(
        SimplicialComplex::close_complex(verts, {{0, 1, 2}, {0, 2, 3}}));
}

// Square annulus: [0,3]^2 minus open (1,2)^2, eight triangles; mesh = 3.
inline ComplexPtr annulus() {
    std::vector<Point> verts = {{0, 0}, {3, 0}, {3, 3}, {0, 3},
                                {1, 1}, {2, 1}, {2, 2}, {1, 2}};
    std::vector<Simplex> maximal = {{0, 1, 5}, {0, 4, 5}, {1, 2, 6}, {1, 5, 6},
                                    {2, 3, 7}, {2, 6, 7}, {0, 3, 4}, {3, 4, 7}};
    return std::make_shared<SimplicialComplex>(
        SimplicialComplex::close_complex(verts, maximal));
}

}  // namespace chainrec::fixtures
