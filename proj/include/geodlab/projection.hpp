#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "geodesic.hpp"
#include "surface_patch.hpp"
#include "types.hpp"

namespace geodlab {

struct ProjectionResult {
    ParamPoint foot_u;
    Vec3 foot_x = Vec3::Zero();
    double distance = 0.0;
    int iterations = 0;
    double residual = 0.0;  // max |(x - S) . e_i| / (|x - S| |e_i|)
    bool converged = false;
    bool multivalued = false;           // distinct near-tied feet were seen
    std::vector<ParamPoint> candidates; // the other tied feet, when any
};

namespace detail {

inline double orthogonality_residual(const SurfacePatch& p, const ParamPoint& u, const Vec3& x,
                                     Vec3* diff_out = nullptr) {
    const Vec3 d = x - p.eval(u);
    if (diff_out) *diff_out = d;
    const double dist = std::max(d.norm(), 1e-30);
    double r = 0.0;
    for (int a = 0; a < 2; ++a) {
        const Vec3 e = p.d1(u, a);
        r = std::max(r, std::abs(d.dot(e)) / (dist * std::max(e.norm(), 1e-30)));
    }
    return r;
}

// Newton iteration on (x - S(u)) . e_a(u) = 0, clamped to a window.
inline bool newton_foot(const SurfacePatch& p, const Vec3& x, const Domain& window,
                        ParamPoint& u, int& iters, double tol, int max_iter = 50) {
    for (int it = 0; it < max_iter; ++it) {
        iters = it + 1;
        const Vec3 diff = x - p.eval(u);
        const Vec3 e1 = p.d1(u, 0), e2 = p.d1(u, 1);
        const double f1 = diff.dot(e1), f2 = diff.dot(e2);
        const double dist = std::max(diff.norm(), 1e-30);
        const double res = std::max(std::abs(f1) / (dist * std::max(e1.norm(), 1e-30)),
                                    std::abs(f2) / (dist * std::max(e2.norm(), 1e-30)));
        if (res <= tol) return true;
        // J_ab = -e_a . e_b + (x - S) . d2 S / du_a du_b
        const double j11 = -e1.dot(e1) + diff.dot(p.d2(u, 0, 0));
        const double j12 = -e1.dot(e2) + diff.dot(p.d2(u, 0, 1));
        const double j22 = -e2.dot(e2) + diff.dot(p.d2(u, 1, 1));
        const double det = j11 * j22 - j12 * j12;
        if (det == 0.0 || !std::isfinite(det)) return false;
        const double s1 = (-f1 * j22 + f2 * j12) / det;
        const double s2 = (-f2 * j11 + f1 * j12) / det;
        ParamPoint next(u.u1 + s1, u.u2 + s2);
        next = window.clamp(next);
        if (std::abs(next.u1 - u.u1) + std::abs(next.u2 - u.u2) < 1e-16 * (1.0 + std::abs(u.u1) + std::abs(u.u2)))
            return res <= tol;
        u = next;
    }
    return false;
}

}  // namespace detail

// Nearest point on the patch: coarse grid seeding followed by Newton on the
// orthogonality system. Two grid minima with distances tied within 1e-6
// relative (and genuinely distinct feet) raise the multivalued warning.
inline ProjectionResult foot_point(const SurfacePatch& p, const Vec3& x, double tol = 1e-10,
                                   int grid_n = 64) {
    const Domain dom = p.domain();
    const int n1 = grid_n;
    const int n2 = grid_n;
    const double du1 = dom.span_u1() / (dom.periodic_u1 ? n1 : n1 - 1);
    const double du2 = dom.span_u2() / (dom.periodic_u2 ? n2 : n2 - 1);

    std::vector<double> dist(std::size_t(n1) * n2);
    auto uat = [&](int i, int j) {
        return ParamPoint(dom.u1_min + i * du1, dom.u2_min + j * du2);
    };
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            dist[std::size_t(i) * n2 + j] = (p.eval(uat(i, j)) - x).norm();

    auto dat = [&](int i, int j) {
        if (dom.periodic_u1) i = ((i % n1) + n1) % n1;
        else i = std::clamp(i, 0, n1 - 1);
        if (dom.periodic_u2) j = ((j % n2) + n2) % n2;
        else j = std::clamp(j, 0, n2 - 1);
        return dist[std::size_t(i) * n2 + j];
    };

    struct Seed {
        int i, j;
        double d;
    };
    std::vector<Seed> seeds;
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            const double d = dat(i, j);
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di)
                for (int dj = -1; dj <= 1 && is_min; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    if (dat(i + di, j + dj) < d) is_min = false;
                }
            if (is_min) seeds.push_back({i, j, d});
        }
    }
    std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.d < b.d; });
    if (seeds.size() > 6) seeds.resize(6);

    const std::vector<Domain> windows = p.newton_subdomains();
    std::vector<ProjectionResult> results;
    for (const Seed& s : seeds) {
        const ParamPoint seed_u = uat(s.i, s.j);
        for (const Domain& w : windows) {
            if (!w.contains(w.wrap(seed_u), 0.5 * std::max(du1, du2))) continue;
            ParamPoint u = w.clamp(seed_u);
            int iters = 0;
            const bool ok = detail::newton_foot(p, x, w, u, iters, tol);
            ProjectionResult r;
            r.foot_u = dom.wrap(u);
            r.foot_x = p.eval(u);
            r.distance = (x - r.foot_x).norm();
            r.iterations = iters;
            r.residual = detail::orthogonality_residual(p, u, x);
            r.converged = ok;
            results.push_back(r);
        }
    }
    if (results.empty()) {
        // Degenerate domain/grid; report the best raw grid point.
        ProjectionResult r;
        r.foot_u = uat(seeds.front().i, seeds.front().j);
        r.foot_x = p.eval(r.foot_u);
        r.distance = seeds.front().d;
        return r;
    }

    std::sort(results.begin(), results.end(), [](const ProjectionResult& a, const ProjectionResult& b) {
        if (a.converged != b.converged) return a.converged;
        return a.distance < b.distance;
    });
    ProjectionResult best = results.front();
    for (std::size_t i = 1; i < results.size(); ++i) {
        const ProjectionResult& other = results[i];
        const bool tied = std::abs(other.distance - best.distance) < 1e-6 * std::max(best.distance, 1e-30);
        const bool distinct = (other.foot_x - best.foot_x).norm() > 1e-6 * (1.0 + best.distance);
        if (tied && distinct) {
            best.multivalued = true;
            best.candidates.push_back(other.foot_u);
        }
    }
    return best;
}

// Seeded variant used when a good starting guess is known (e.g. the previous
// node of a projected curve). Falls back to the full grid search when Newton
// fails from the seed.
inline ProjectionResult foot_point_seeded(const SurfacePatch& p, const Vec3& x,
                                          const ParamPoint& seed, double tol = 1e-10) {
    const Domain dom = p.domain();
    for (const Domain& w : p.newton_subdomains()) {
        if (!w.contains(w.wrap(seed), 1e-12 * (std::abs(w.span_u1()) + std::abs(w.span_u2()))))
            continue;
        ParamPoint u = w.clamp(seed);
        int iters = 0;
        if (detail::newton_foot(p, x, w, u, iters, tol)) {
            ProjectionResult r;
            r.foot_u = dom.wrap(u);
            r.foot_x = p.eval(u);
            r.distance = (x - r.foot_x).norm();
            r.iterations = iters;
            r.residual = detail::orthogonality_residual(p, u, x);
            r.converged = true;
            return r;
        }
    }
    return foot_point(p, x, tol);
}

// Node-wise foot-point projection of a sampled curve, preserving time
// stamps. Consecutive nodes warm-start the solver; a multivalued warning on
// any node flags the whole curve.
inline SampledCurve project_curve(const SampledCurve& curve, const SurfacePatch& target,
                                  double tol = 1e-10) {
    SampledCurve out;
    out.has_velocity = false;
    out.has_param = true;
    out.exit = curve.exit;
    bool have_prev = false;
    ParamPoint prev;
    for (const CurveNode& n : curve.nodes) {
        const ProjectionResult r = have_prev ? foot_point_seeded(target, n.x, prev, tol)
                                             : foot_point(target, n.x, tol);
        out.multivalued = out.multivalued || r.multivalued;
        out.nodes.push_back(CurveNode{n.t, r.foot_u, r.foot_x, Vec2::Zero()});
        prev = r.foot_u;
        have_prev = r.converged;
    }
    return out;
}

struct InverseConsistencyReport {
    double max_deviation = 0.0;
    int samples = 0;
    bool all_converged = true;
};

// For sampled points x on s1, checks that following the projection to s2 and
// back returns to x (the two projections of a regular constant-distance pair
// are inverses).
inline InverseConsistencyReport inverse_consistency(const SurfacePatch& s1,
                                                    const SurfacePatch& s2, int samples,
                                                    double tol = 1e-10, std::uint64_t seed = 42,
                                                    double margin = 0.1) {
    Rng rng(seed);
    const Domain d1 = s1.domain();
    InverseConsistencyReport rep;
    rep.samples = samples;
    for (int k = 0; k < samples; ++k) {
        const double m1 = d1.periodic_u1 ? 0.0 : margin * d1.span_u1();
        const double m2 = d1.periodic_u2 ? 0.0 : margin * d1.span_u2();
        const ParamPoint u(rng.uniform(d1.u1_min + m1, d1.u1_max - m1),
                           rng.uniform(d1.u2_min + m2, d1.u2_max - m2));
        const Vec3 x = s1.eval(u);
        const ProjectionResult down = foot_point(s2, x, tol);
        const ProjectionResult back = foot_point(s1, down.foot_x, tol);
        rep.all_converged = rep.all_converged && down.converged && back.converged;
        rep.max_deviation = std::max(rep.max_deviation, (back.foot_x - x).norm());
    }
    return rep;
}

}  // namespace geodlab
