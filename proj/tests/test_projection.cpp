#include <catch2/catch.hpp>

#include <cmath>
#include <memory>
#include <vector>

#include "geodlab/geodesic.hpp"
#include "geodlab/offset_patch.hpp"
#include "geodlab/planar_curve.hpp"
#include "geodlab/projection.hpp"
#include "geodlab/surface_patch.hpp"

using namespace geodlab;

TEST_CASE("foot point on a sphere is radial") {
    // Chart with the poles along y so the query axis is interior.
    const SpherePatch sphere(1.0, Vec3::Zero(), 1);
    const ProjectionResult r = foot_point(sphere, Vec3(0, 0, 5), 1e-10);
    REQUIRE(r.converged);
    REQUIRE((r.foot_x - Vec3(0, 0, 1)).norm() <= 1e-9);
    REQUIRE(r.distance == Approx(4.0).epsilon(1e-12));
    REQUIRE(r.residual <= 1e-10);
    REQUIRE_FALSE(r.multivalued);
}

TEST_CASE("foot point on a round cylinder is axial") {
    const RoundCylinderPatch cyl(1.0, -10.0, 10.0);
    const ProjectionResult r = foot_point(cyl, Vec3(2, 0, 7), 1e-10);
    REQUIRE(r.converged);
    REQUIRE((r.foot_x - Vec3(1, 0, 7)).norm() <= 1e-9);
    REQUIRE(r.distance == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("foot of a normal-offset query is the construction point") {
    const GraphPatch p(1.0, 2.0, 0.0);
    const ParamPoint u0(0.1, 0.2);
    const Vec3 x = p.eval(u0) + 0.5 * p.unit_normal(u0);
    const ProjectionResult r = foot_point(p, x, 1e-12);
    REQUIRE(r.converged);
    REQUIRE(std::abs(r.foot_u.u1 - u0.u1) <= 1e-8);
    REQUIRE(std::abs(r.foot_u.u2 - u0.u2) <= 1e-8);
    REQUIRE(r.distance == Approx(0.5).epsilon(1e-10));

    // Dense-grid search oracle: no grid point beats the solver's foot by
    // more than the grid resolution squared times a curvature bound.
    const Domain dom = p.domain();
    double best = 1e300;
    const int n = 200;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const ParamPoint u(dom.u1_min + dom.span_u1() * i / (n - 1.0),
                               dom.u2_min + dom.span_u2() * j / (n - 1.0));
            best = std::min(best, (p.eval(u) - x).norm());
        }
    const double cell = dom.span_u1() / (n - 1.0);
    REQUIRE(best >= r.distance - 9.0 * cell * cell);
    REQUIRE(r.distance <= best + 1e-12);
}

TEST_CASE("foot point is orthogonal within 1e-7 rad") {
    Rng rng(31);
    const auto graph = std::make_shared<GraphPatch>(1.0, 2.0, quartic_cross_field(0.2));
    const SpherePatch sphere(1.5);
    const SurfacePatch* patches[] = {graph.get(), &sphere};
    for (const SurfacePatch* p : patches) {
        const Domain d = p->domain();
        for (int k = 0; k < 40; ++k) {
            const double m1 = d.periodic_u1 ? 0.0 : 0.2 * d.span_u1();
            const double m2 = d.periodic_u2 ? 0.0 : 0.2 * d.span_u2();
            const ParamPoint u(rng.uniform(d.u1_min + m1, d.u1_max - m1),
                               rng.uniform(d.u2_min + m2, d.u2_max - m2));
            const Vec3 x = p->eval(u) + rng.uniform(0.2, 2.0) * p->unit_normal(u);
            const ProjectionResult r = foot_point(*p, x, 1e-10);
            REQUIRE(r.converged);
            const Vec3 diff = x - r.foot_x;
            const Vec3 n = p->unit_normal(r.foot_u);
            const double angle = std::atan2(diff.cross(n).norm(), std::abs(diff.dot(n)));
            REQUIRE(angle <= 1e-7);
        }
    }
}

TEST_CASE("inverse consistency of round constant-distance pairs") {
    const SpherePatch s_out(2.0), s_in(1.0);
    const InverseConsistencyReport sph = inverse_consistency(s_out, s_in, 100, 1e-12);
    REQUIRE(sph.all_converged);
    REQUIRE(sph.max_deviation <= 1e-8);

    const RoundCylinderPatch c_out(3.0, -5.0, 5.0), c_in(1.0, -5.0, 5.0);
    const InverseConsistencyReport cyl = inverse_consistency(c_out, c_in, 100, 1e-12);
    REQUIRE(cyl.all_converged);
    REQUIRE(cyl.max_deviation <= 1e-8);
}

TEST_CASE("projected geodesics between concentric spheres stay geodesic") {
    const SpherePatch outer(2.0), inner(1.0);
    const SampledCurve g =
        integrate_geodesic(outer, {ParamPoint(0.4, 0.1), Vec2(0.4, 0.15)}, 1.0, 1e-12, 101);
    const SampledCurve proj = project_curve(g, inner, 1e-12);
    REQUIRE_FALSE(proj.multivalued);
    for (double t : {0.2, 0.5, 0.8}) REQUIRE(std::abs(geodesic_curvature(inner, proj, t)) <= 1e-6);
}

namespace {
SampledCurve sampled_line(const Vec3& p0, const Vec3& dir, double t0, double t1, int n) {
    std::vector<double> ts(n);
    std::vector<Vec3> xs(n);
    for (int i = 0; i < n; ++i) {
        ts[i] = t0 + (t1 - t0) * i / (n - 1.0);
        xs[i] = p0 + ts[i] * dir;
    }
    return SampledCurve::from_ambient(ts, xs);
}
}  // namespace

TEST_CASE("line orthogonal to the cylinder axis projects to a geodesic arc") {
    const RoundCylinderPatch cyl(1.0, -4.0, 4.0);
    const SampledCurve line = sampled_line(Vec3(2, 0, 0), Vec3(0, 1, 0), -1.5, 1.5, 301);
    const SampledCurve proj = project_curve(line, cyl, 1e-12);
    // The image is an arc of the z = 0 cross-section circle.
    for (const CurveNode& n : proj.nodes) {
        REQUIRE(std::abs(n.x.z()) <= 1e-12);
        REQUIRE(std::abs(n.x.head<2>().norm() - 1.0) <= 1e-10);
    }
    for (double t : {-0.9, -0.3, 0.0, 0.4, 1.0})
        REQUIRE(std::abs(geodesic_curvature(cyl, proj, t)) <= 1e-6);
}

TEST_CASE("slanted line projects to a measurably non-geodesic curve") {
    const RoundCylinderPatch cyl(1.0, -4.0, 4.0);
    // 45 degrees to the axis, closest approach at t = 0.
    const Vec3 dir = Vec3(0, 1, 1) / std::sqrt(2.0);
    const SampledCurve line = sampled_line(Vec3(2, 0, 0), dir, -1.2, 1.2, 241);
    const SampledCurve proj = project_curve(line, cyl, 1e-12);

    // Unrolled-plane oracle: the projected curve is (phi(t), z(t)) with
    // phi = atan(q), q = t / (2 sqrt 2), z = t / sqrt 2, and its geodesic
    // curvature equals the plane curvature of that graph.
    auto oracle = [](double t) {
        const double qp = 1.0 / (2.0 * std::sqrt(2.0));
        const double q = t * qp;
        const double phi1 = qp / (1.0 + q * q);
        const double phi2 = -2.0 * q * qp * qp / ((1.0 + q * q) * (1.0 + q * q));
        const double z1 = 1.0 / std::sqrt(2.0);
        return std::abs(phi1 * 0.0 - z1 * phi2) / std::pow(phi1 * phi1 + z1 * z1, 1.5);
    };

    double max_measured = 0.0, max_oracle = 0.0;
    for (double t = -1.0; t <= 1.0; t += 0.05) {
        const double kg = geodesic_curvature(cyl, proj, t);
        REQUIRE(kg == Approx(oracle(t)).margin(2e-4));
        max_measured = std::max(max_measured, kg);
        max_oracle = std::max(max_oracle, oracle(t));
    }
    // By symmetry the curvature vanishes exactly at closest approach, but it
    // is bounded away from zero on the bracketing window.
    REQUIRE(std::abs(geodesic_curvature(cyl, proj, 0.0)) <= 1e-4);
    REQUIRE(max_oracle >= 0.05);
    REQUIRE(max_measured >= 0.9 * max_oracle);
}

TEST_CASE("foot point near the capped-cylinder seam picks the right chart") {
    const CappedCylinderPatch cap(1.5);
    const double phi = 0.9;
    // Slightly below the seam plane and outside: the nearest point is on the cap.
    const Vec3 q(1.7 * std::cos(phi), 1.7 * std::sin(phi), -0.04);
    const ProjectionResult r = foot_point(cap, q, 1e-12);
    REQUIRE(r.converged);
    REQUIRE(r.foot_u.u2 < 0.0);
    REQUIRE((r.foot_x - 1.5 * q.normalized()).norm() <= 1e-9);
    // Both chart windows converge to the same foot; that is not a tie.
    REQUIRE_FALSE(r.multivalued);

    // Slightly above: nearest point is on the cylinder wall.
    const Vec3 q2(1.7 * std::cos(phi), 1.7 * std::sin(phi), 0.04);
    const ProjectionResult r2 = foot_point(cap, q2, 1e-12);
    REQUIRE(r2.converged);
    REQUIRE(r2.foot_u.u2 >= 0.0);
    REQUIRE((r2.foot_x - Vec3(1.5 * std::cos(phi), 1.5 * std::sin(phi), 0.04)).norm() <= 1e-9);
}

TEST_CASE("tied feet raise the multivalued warning") {
    // The center axis of an elliptic cylinder is equidistant from the two
    // minor-axis vertices.
    const auto ellipse = std::make_shared<EllipseCurve>(1.0, 3.0);
    const EllipticCylinderPatch cyl(ellipse, -2.0, 2.0);
    const ProjectionResult r = foot_point(cyl, Vec3(0, 0, 0.3), 1e-10);
    REQUIRE(r.multivalued);
    REQUIRE(!r.candidates.empty());
}
