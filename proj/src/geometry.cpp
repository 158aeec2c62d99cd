#include "chainrec/geometry.hpp"

#include <cmath>

namespace chainrec {

PointD to_double(const Point& p) {
    PointD out(p.size());
    for (size_t i = 0; i < p.size(); ++i) out[i] = to_double(p[i]);
    return out;
}

Point to_rat(const PointD& p) {
    Point out(p.size());
    for (size_t i = 0; i < p.size(); ++i) out[i] = rat_from_double(p[i]);
    return out;
}

Rat dist2(const Point& a, const Point& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        Rat d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double dist_d(const PointD& a, const PointD& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double dist_d(const Point& a, const Point& b) {
    return dist_d(to_double(a), to_double(b));
}

bool closer_than(const Point& a, const PointD& ad, const Point& b,
                 const PointD& bd, const Rat& eps, double eps_d) {
    double d = dist_d(ad, bd);
    if (d < eps_d - 1e-9) return true;
    if (d > eps_d + 1e-9) return false;
    return dist2(a, b) < eps * eps;
}

namespace {

// Gaussian elimination on an augmented rational matrix; returns false when
// the system is inconsistent.
bool solve_exact(std::vector<std::vector<Rat>>& m, int rows, int cols,
                 std::vector<Rat>& sol) {
    int rank = 0;
    std::vector<int> pivot_col(rows, -1);
    for (int c = 0; c < cols && rank < rows; ++c) {
        int p = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][c] != 0) { p = r; break; }
        if (p < 0) continue;
        std::swap(m[rank], m[p]);
        Rat inv = m[rank][c];
        for (int j = c; j <= cols; ++j) m[rank][j] /= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || m[r][c] == 0) continue;
            Rat f = m[r][c];
            for (int j = c; j <= cols; ++j) m[r][j] -= f * m[rank][j];
        }
        pivot_col[rank] = c;
        ++rank;
    }
    for (int r = rank; r < rows; ++r)
        if (m[r][cols] != 0) return false;
    sol.assign(cols, Rat(0));
    for (int r = 0; r < rank; ++r) sol[pivot_col[r]] = m[r][cols];
    // Free variables would mean affinely dependent vertices; leave them 0.
    return true;
}

}  // namespace

std::optional<std::vector<Rat>> barycentric(const std::vector<Point>& verts,
                                            const Point& x) {
    const int k = static_cast<int>(verts.size()) - 1;
    const int d = static_cast<int>(x.size());
    if (k < 0) return std::nullopt;
    if (k == 0) {
        if (verts[0] == x) return std::vector<Rat>{Rat(1)};
        return std::nullopt;
    }
    // Solve sum b_i (v_i - v_0) = x - v_0 over the edge vectors.
    std::vector<std::vector<Rat>> m(d, std::vector<Rat>(k + 1));
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < k; ++c) m[r][c] = verts[c + 1][r] - verts[0][r];
        m[r][k] = x[r] - verts[0][r];
    }
    std::vector<Rat> sol;
    if (!solve_exact(m, d, k, sol)) return std::nullopt;
    std::vector<Rat> bary(k + 1);
    Rat s = 0;
    for (int i = 0; i < k; ++i) {
        bary[i + 1] = sol[i];
        s += sol[i];
    }
    bary[0] = Rat(1) - s;
    return bary;
}

bool affinely_independent(const std::vector<Point>& verts) {
    const int k = static_cast<int>(verts.size()) - 1;
    if (k <= 0) return true;
    const int d = static_cast<int>(verts[0].size());
    if (k > d) return false;
    std::vector<std::vector<Rat>> m(d, std::vector<Rat>(k + 1));
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < k; ++c) m[r][c] = verts[c + 1][r] - verts[0][r];
    // Rank of the edge-vector matrix must be k.
    int rank = 0;
    for (int c = 0; c < k && rank < d; ++c) {
        int p = -1;
        for (int r = rank; r < d; ++r)
            if (m[r][c] != 0) { p = r; break; }
        if (p < 0) return false;
        std::swap(m[rank], m[p]);
        for (int r = 0; r < d; ++r) {
            if (r == rank || m[r][c] == 0) continue;
            Rat f = m[r][c] / m[rank][c];
            for (int j = c; j < k; ++j) m[r][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank == k;
}

Point convex_combination(const std::vector<Point>& verts,
                         const std::vector<Rat>& coeffs) {
    Point out(verts[0].size(), Rat(0));
    for (size_t i = 0; i < verts.size(); ++i)
        for (size_t j = 0; j < out.size(); ++j)
            out[j] += coeffs[i] * verts[i][j];
    return out;
}

}  // namespace chainrec
