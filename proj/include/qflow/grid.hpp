#pragma once
#include <vector>

#include "qflow/tensor.hpp"

// Uniform 2-D MAC grid: scalars, Q coefficients and stresses at cell centers,
// u on x-faces, v on y-faces.

namespace qflow {

enum class Bc { dirichlet0, periodic };

struct GridSpec {
    int nx = 4, ny = 4;
    double lx = 1.0, ly = 1.0;
    Bc bc = Bc::dirichlet0;

    double hx() const { return lx / nx; }
    double hy() const { return ly / ny; }
    int cells() const { return nx * ny; }
    double cell_area() const { return hx() * hy(); }
    double xc(int i) const { return (i + 0.5) * hx(); }  // cell centers
    double yc(int j) const { return (j + 0.5) * hy(); }
    void validate() const;  // nx, ny >= 4, positive extents
    bool same_layout(const GridSpec& o) const {
        return nx == o.nx && ny == o.ny && bc == o.bc;
    }
};

inline int cid(const GridSpec& g, int i, int j) { return j * g.nx + i; }
inline int uid(const GridSpec& g, int i, int j) { return j * (g.nx + 1) + i; }
inline int vid(const GridSpec& g, int i, int j) { return j * g.nx + i; }

struct ScalarField {
    GridSpec g;
    std::vector<double> a;
    ScalarField() = default;
    explicit ScalarField(const GridSpec& gs) : g(gs), a(gs.cells(), 0.0) {}
    double& at(int i, int j) { return a[cid(g, i, j)]; }
    double at(int i, int j) const { return a[cid(g, i, j)]; }
};

struct VecField {  // cell-centered vector field
    GridSpec g;
    std::vector<double> x, y;
    VecField() = default;
    explicit VecField(const GridSpec& gs) : g(gs), x(gs.cells(), 0.0), y(gs.cells(), 0.0) {}
};

struct MatField {  // cell-centered m x m matrix field
    GridSpec g;
    int m = 2;
    std::vector<double> a;
    MatField() = default;
    MatField(const GridSpec& gs, int mm) : g(gs), m(mm), a((size_t)gs.cells() * mm * mm, 0.0) {}
    double& at(int i, int j, int r, int c) { return a[((size_t)cid(g, i, j) * m + r) * m + c]; }
    double at(int i, int j, int r, int c) const { return a[((size_t)cid(g, i, j) * m + r) * m + c]; }
    Mat mat(int i, int j) const {
        Mat M(m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) M(r, c) = at(i, j, r, c);
        return M;
    }
    void set(int i, int j, const Mat& M) {
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) at(i, j, r, c) = M(r, c);
    }
};

struct QField {  // minimal-basis Q coefficients at cell centers
    GridSpec g;
    int d = 2;
    std::vector<double> a;
    QField() = default;
    QField(const GridSpec& gs, int dim) : g(gs), d(dim), a((size_t)gs.cells() * ncoef(dim), 0.0) {}
    int nc() const { return ncoef(d); }
    double& at(int i, int j, int c) { return a[(size_t)cid(g, i, j) * nc() + c]; }
    double at(int i, int j, int c) const { return a[(size_t)cid(g, i, j) * nc() + c]; }
    QTensor qten(int i, int j) const {
        QTensor Q(d);
        for (int c = 0; c < nc(); ++c) Q.q[c] = at(i, j, c);
        return Q;
    }
    void set(int i, int j, const QTensor& Q) {
        for (int c = 0; c < nc(); ++c) at(i, j, c) = Q.q[c];
    }
};

struct VelocityField {  // staggered: u on x-faces, v on y-faces
    GridSpec g;
    std::vector<double> u, v;
    VelocityField() = default;
    explicit VelocityField(const GridSpec& gs)
        : g(gs), u((size_t)(gs.nx + 1) * gs.ny, 0.0), v((size_t)gs.nx * (gs.ny + 1), 0.0) {}
    double& uat(int i, int j) { return u[uid(g, i, j)]; }
    double uat(int i, int j) const { return u[uid(g, i, j)]; }
    double& vat(int i, int j) { return v[vid(g, i, j)]; }
    double vat(int i, int j) const { return v[vid(g, i, j)]; }
    // In dirichlet0 mode the wall-normal faces carry the no-slip boundary;
    // the scheme keeps them at zero.
    void zero_normal_boundary();
};

}  // namespace qflow
