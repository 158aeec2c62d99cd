#pragma once

#include "chainrec/net.hpp"
#include "chainrec/simplicial_complex.hpp"
#include "chainrec/vertex_map.hpp"

namespace chainrec {

// The second barycentric subdivision K'' of K together with the simplicial
// crush map g: (K'')^[0] -> (K')^[0] sending the barycenter labelled by a
// descending chain (S_0 > ... > S_k) of K-simplices to b(S_k).
struct CrushPair {
    ComplexPtr base;     // K
    Subdivision first;   // K' over K (K'-vertex i = b(K-simplex i))
    Subdivision second;  // K'' over K'
    ComplexPtr kp;       // shared K'
    ComplexPtr kpp;      // shared K''
    VertexMap g;         // kpp -> kp
};

CrushPair crush_vertex_map(const ComplexPtr& k);

// Increasing families of net-point sets U_0 c ... c U_n (open, at net level)
// and K_0 c ... c K_n (skeleta), with K_i c U_i.
struct TrapChain {
    NetPtr net;
    std::vector<std::vector<char>> opens;    // U_i indicators over the net
    std::vector<std::vector<char>> closeds;  // K_i indicators

    int levels() const { return static_cast<int>(opens.size()); }
    void validate() const;  // BadParameter on a broken nesting invariant
};

// U_i = net interior of the closed star union over barycenters of base
// simplices of dimension <= i; K_i = net points on |K^[i]|. A net point is
// interior when every net neighbour within 2*delta lies in the closure.
TrapChain skeleton_trap_chain(const CrushPair& pair, const NetPtr& net);

// Lemma-2.5 style filter, adapted to eps-chains. Premises (both checked,
// PremiseViolated with an (i, point) witness otherwise):
//   (a) f(U_i) lies within delta of K_i, and
//   (b) every net point within eps+delta of K_i belongs to U_i,
// so the (eps+delta)-fattening K_i^+ of K_i is forward-invariant for
// eps-chains. Returns (X \ U_n) u (K_n^+ \ U_{n-1}) u ... u K_0^+, which
// provably contains cr_eps(f).
std::vector<int> trap_filter(const SampledMap& f, const TrapChain& chain,
                             const Rat& eps);

// h = f o g where g is the crush map with target f's source subdivision
// level. `lk` is the complex whose first subdivision realizes f.source.
// If out_pair is non-null the constructed crush pair is stored there.
VertexMap skeleton_compress(const ComplexPtr& lk, const VertexMap& f,
                            CrushPair* out_pair = nullptr);

struct PipelineResult {
    SampledMap h_sampled;  // H on F's net
    VertexMap h;           // L^(k+2) -> L
    VertexMap f;           // simplicial approximation, L^(k+1) -> L
    int depth = 0;         // k
    Rat mesh2_l;
    Rat sup_dist_fh;       // certified upper bound on sup d(F, H) at net points
};

// Theorem-3.3 pipeline: simplicial approximation of F by the star condition
// on iterated subdivisions (deepening up to max_depth), then skeleton
// compression. Requires mesh(L) < epsilon.
PipelineResult poly_pipeline(const ComplexPtr& l, const SampledMap& F,
                             const Rat& epsilon, int max_depth = 6);

}  // namespace chainrec
