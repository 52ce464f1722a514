#pragma once

#include <cmath>
#include <stdexcept>

#include "numerics.hpp"
#include "surface_patch.hpp"
#include "types.hpp"

namespace geodlab {

struct ImmersionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FundamentalForms {
    double g11 = 0, g12 = 0, g22 = 0;  // first fundamental form
    double det = 0;                    // metric determinant
    double L = 0, M = 0, N = 0;        // second fundamental form, d2 S . n
    Vec3 normal = Vec3::Zero();        // unit normal (outward by orientation)
    double V = 0;                      // |e1 x e2| = sqrt(det)

    double g(int a, int b) const { return a == b ? (a == 0 ? g11 : g22) : g12; }
    double metric_dot(const Vec2& x, const Vec2& y) const {
        return g11 * x.x() * y.x() + g12 * (x.x() * y.y() + x.y() * y.x()) + g22 * x.y() * y.y();
    }
};

inline FundamentalForms fundamental_forms(const SurfacePatch& p, const ParamPoint& u) {
    const Vec3 e1 = p.d1(u, 0);
    const Vec3 e2 = p.d1(u, 1);
    FundamentalForms f;
    f.g11 = e1.dot(e1);
    f.g12 = e1.dot(e2);
    f.g22 = e2.dot(e2);
    f.det = f.g11 * f.g22 - f.g12 * f.g12;
    if (!(f.g11 > 0.0) || !(f.det > 0.0))
        throw ImmersionError("fundamental_forms: degenerate metric");
    const Vec3 w = e1.cross(e2);
    f.V = w.norm();
    f.normal = w / f.V;
    f.L = p.d2(u, 0, 0).dot(f.normal);
    f.M = p.d2(u, 0, 1).dot(f.normal);
    f.N = p.d2(u, 1, 1).dot(f.normal);
    return f;
}

struct PrincipalCurvatures {
    double k1 = 0, k2 = 0;  // k1 >= k2, positive for convex surfaces
    Vec2 dir1 = Vec2::Zero(), dir2 = Vec2::Zero();  // parameter-space directions
};

// Eigenvalues of the shape operator against the first form, signed so that
// convex surfaces with outward normal have positive curvature (a sphere of
// radius R reports 1/R).
inline PrincipalCurvatures principal_curvatures(const SurfacePatch& p, const ParamPoint& u) {
    const FundamentalForms f = fundamental_forms(p, u);
    // det(B + k G) = 0 with B the second form; roots are the negated
    // standard shape-operator eigenvalues, i.e. the convex-positive ones.
    const double a = f.det;
    const double b = f.L * f.g22 + f.N * f.g11 - 2.0 * f.M * f.g12;
    // b^2 - 4ac rewritten without the catastrophic cancellation at umbilics.
    const double d1 = f.L * f.g22 - f.N * f.g11;
    const double disc = std::max(0.0, d1 * d1 + 4.0 * (f.M * f.g11 - f.L * f.g12) *
                                                    (f.M * f.g22 - f.N * f.g12));
    const double s = std::sqrt(disc);
    PrincipalCurvatures pc;
    pc.k1 = (-b + s) / (2.0 * a);
    pc.k2 = (-b - s) / (2.0 * a);

    auto direction_for = [&](double k) -> Vec2 {
        // Rows of (B + k G); the eigenvector is orthogonal to both.
        const Vec2 r0(f.L + k * f.g11, f.M + k * f.g12);
        const Vec2 r1(f.M + k * f.g12, f.N + k * f.g22);
        const Vec2 row = r0.norm() >= r1.norm() ? r0 : r1;
        if (row.norm() < 1e-12 * (std::abs(k) * f.det + 1.0)) return Vec2(1.0, 0.0);
        return Vec2(-row.y(), row.x());
    };
    auto g_normalize = [&](Vec2 v) {
        const double n = std::sqrt(std::max(f.metric_dot(v, v), 1e-300));
        return Vec2(v / n);
    };
    pc.dir1 = g_normalize(direction_for(pc.k1));
    // Force exact g-orthogonality; for umbilic points any orthogonal pair works.
    Vec2 d2 = direction_for(pc.k2);
    d2 -= f.metric_dot(d2, pc.dir1) * pc.dir1;
    if (f.metric_dot(d2, d2) < 1e-20) {
        d2 = Vec2(-(f.g12 * pc.dir1.x() + f.g22 * pc.dir1.y()),
                  f.g11 * pc.dir1.x() + f.g12 * pc.dir1.y());
    }
    pc.dir2 = g_normalize(d2);
    return pc;
}

struct Christoffel {
    double gamma[2][2][2] = {};  // gamma[k][i][j], symmetric in (i, j)
};

// Closed form for graph patches: Gamma^k_ij = z_k d_i z_j / Delta.
inline Christoffel christoffel_graph(const GraphPatch& p, const ParamPoint& u) {
    const Vec2 z = z_fields(p, u);
    double dz[2][2];
    dz[0][0] = p.a1() + p.h().partial(2, 0, u);
    dz[0][1] = p.h().partial(1, 1, u);
    dz[1][0] = dz[0][1];
    dz[1][1] = p.a2() + p.h().partial(0, 2, u);
    const double delta = 1.0 + z.squaredNorm();
    Christoffel ch;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) ch.gamma[k][i][j] = z[k] * dz[i][j] / delta;
    return ch;
}

// General patches: Gamma^k_ij = g^{kl} (d_i d_j S . e_l), exact in the
// analytic second partials.
inline Christoffel christoffel_general(const SurfacePatch& p, const ParamPoint& u) {
    const Vec3 e[2] = {p.d1(u, 0), p.d1(u, 1)};
    const double g11 = e[0].dot(e[0]), g12 = e[0].dot(e[1]), g22 = e[1].dot(e[1]);
    const double det = g11 * g22 - g12 * g12;
    if (!(det > 0.0)) throw ImmersionError("christoffel: degenerate metric");
    const double gi[2][2] = {{g22 / det, -g12 / det}, {-g12 / det, g11 / det}};
    Christoffel ch;
    for (int i = 0; i < 2; ++i) {
        for (int j = i; j < 2; ++j) {
            const Vec3 dij = p.d2(u, i, j);
            for (int k = 0; k < 2; ++k) {
                const double v = gi[k][0] * dij.dot(e[0]) + gi[k][1] * dij.dot(e[1]);
                ch.gamma[k][i][j] = v;
                ch.gamma[k][j][i] = v;
            }
        }
    }
    return ch;
}

inline Christoffel christoffel(const SurfacePatch& p, const ParamPoint& u) {
    if (const auto* gp = dynamic_cast<const GraphPatch*>(&p)) return christoffel_graph(*gp, u);
    return christoffel_general(p, u);
}

// Validation route: 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij) with the
// metric derivatives taken by central differences.
inline Christoffel christoffel_metric_fd(const SurfacePatch& p, const ParamPoint& u,
                                         double base_step = 1e-5) {
    auto metric = [&p](const ParamPoint& q) {
        const Vec3 e1 = p.d1(q, 0), e2 = p.d1(q, 1);
        Mat2 g;
        g << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
        return g;
    };
    Mat2 dg[2];
    for (int l = 0; l < 2; ++l) {
        const double h = fd_step(l == 0 ? u.u1 : u.u2, base_step);
        Vec2 off = Vec2::Zero();
        off[l] = h;
        dg[l] = (metric(u + off) - metric(u + Vec2(-off))) / (2.0 * h);
    }
    const Mat2 g = metric(u);
    const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    if (!(det > 0.0)) throw ImmersionError("christoffel_metric_fd: degenerate metric");
    Mat2 gi;
    gi << g(1, 1) / det, -g(0, 1) / det, -g(0, 1) / det, g(0, 0) / det;
    Christoffel ch;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double s = 0.0;
                for (int l = 0; l < 2; ++l)
                    s += gi(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                ch.gamma[k][i][j] = 0.5 * s;
            }
    return ch;
}

}  // namespace geodlab
