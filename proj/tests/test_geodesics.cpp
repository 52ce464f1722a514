#include <catch2/catch.hpp>

#include <cmath>
#include <memory>
#include <vector>

#include "geodlab/geodesic.hpp"
#include "geodlab/richardson.hpp"
#include "geodlab/surface_patch.hpp"

using namespace geodlab;

TEST_CASE("geodesic rhs") {
    const GraphPatch plane(0.0, 0.0, 0.0);
    const GeodesicRhs flat = geodesic_rhs(plane, {ParamPoint(0.3, -0.8), Vec2(0.7, 0.2)});
    REQUIRE(flat.acceleration.norm() <= 1e-15);
    REQUIRE(flat.velocity.isApprox(Vec2(0.7, 0.2)));

    const GraphPatch p(1.0, 2.0, 0.0);
    const GeodesicRhs r = geodesic_rhs(p, {ParamPoint(0.0, 0.1), Vec2(1.0, 0.0)});
    REQUIRE(r.acceleration.y() == Approx(-0.2 / 1.04).epsilon(1e-12));

    const GeodesicRhs r0 = geodesic_rhs(p, {ParamPoint(0.0, 0.0), Vec2(1.0, 0.0)});
    REQUIRE(r0.acceleration.norm() <= 1e-15);
}

TEST_CASE("plane geodesics are straight") {
    const GraphPatch plane(0.0, 0.0, 0.0);
    const SampledCurve c = integrate_geodesic(plane, {ParamPoint(0, 0), Vec2(1, 0)}, 1.0, 1e-10);
    REQUIRE(c.exit == SampledCurve::Exit::completed);
    REQUIRE((c.nodes.back().x - Vec3(1, 0, 0)).norm() <= 1e-12);
}

TEST_CASE("quarter great circle on the unit sphere") {
    const SpherePatch sphere(1.0);
    const SampledCurve c =
        integrate_geodesic(sphere, {ParamPoint(0, 0), Vec2(1, 0)}, 0.5 * M_PI, 1e-10);
    REQUIRE(c.exit == SampledCurve::Exit::completed);
    REQUIRE((c.nodes.back().x - Vec3(0, 1, 0)).norm() <= 1e-8);
}

TEST_CASE("induced-metric speed is conserved") {
    const double tol = 1e-10, t_end = 1.0;
    const GraphPatch p(1.0, 2.0, quartic_cross_field(0.25));
    const SampledCurve c =
        integrate_geodesic(p, {ParamPoint(0.1, 0.2), Vec2(0.9, -0.3)}, t_end, tol);
    REQUIRE(c.exit == SampledCurve::Exit::completed);
    const double v0 = metric_speed(p, c.nodes.front());
    for (const CurveNode& n : c.nodes)
        REQUIRE(std::abs(metric_speed(p, n) - v0) <= 10.0 * tol * t_end * v0);
}

TEST_CASE("time reversal returns to the start") {
    const double tol = 1e-10, t_end = 1.0;
    const SpherePatch sphere(1.5);
    const GeodesicState s0{ParamPoint(0.3, -0.2), Vec2(0.5, 0.4)};
    const SampledCurve fwd = integrate_geodesic(sphere, s0, t_end, tol);
    REQUIRE(fwd.exit == SampledCurve::Exit::completed);
    const CurveNode& end = fwd.nodes.back();
    const SampledCurve back = integrate_geodesic(sphere, {end.u, Vec2(-end.v)}, t_end, tol);
    REQUIRE(back.exit == SampledCurve::Exit::completed);
    REQUIRE((back.nodes.back().x - fwd.nodes.front().x).norm() <= 100.0 * tol);
}

TEST_CASE("leaving the chart truncates the curve with a reason") {
    const GraphPatch p(1.0, 2.0, 0.0);  // domain [-2, 2]^2
    const SampledCurve c = integrate_geodesic(p, {ParamPoint(1.9, 0.0), Vec2(1, 0)}, 1.0, 1e-10);
    REQUIRE(c.exit == SampledCurve::Exit::left_domain);
    REQUIRE(!c.nodes.empty());
    REQUIRE(c.nodes.back().t < 1.0);
    REQUIRE(p.domain().contains(c.nodes.back().u));
}

TEST_CASE("integration route reproduces the deflection ratio to quadratic order") {
    // Stencil the second derivative of x2(t) from a short integrated
    // geodesic; the ratio approximates -(a1 a2) with an O(x2^2) defect.
    const GraphPatch p(1.0, 2.0, 0.0);
    const double x2 = 0.05, delta = 1e-3;
    const GeodesicState s0{ParamPoint(0.0, x2), Vec2(1.0, 0.0)};
    const SampledCurve fwd = integrate_geodesic_at(p, s0, {0.0, delta, 2 * delta}, 1e-12);
    const SampledCurve bwd = integrate_geodesic_at(p, s0, {0.0, -delta, -2 * delta}, 1e-12);
    const std::array<double, 5> samples = {bwd.nodes[0].u.u2, bwd.nodes[1].u.u2, x2,
                                           fwd.nodes[1].u.u2, fwd.nodes[2].u.u2};
    const double ratio = stencil5_d2(samples, delta) / x2;
    // Exact finite-scale value is -a1 a2 / (1 + a2^2 x2^2): defect 2 a2^2 x2^2.
    REQUIRE(ratio == Approx(-2.0 / (1.0 + 4.0 * x2 * x2)).margin(1e-7));
    REQUIRE(ratio == Approx(-2.0).margin(10.0 * x2 * x2));
    REQUIRE(std::abs(ratio + 2.0) > 1e-4);  // the finite-scale defect is real
}

TEST_CASE("integrator rejects invalid tolerances and start states") {
    const GraphPatch p(1.0, 2.0, 0.0);
    const GeodesicState s0{ParamPoint(0, 0), Vec2(1, 0)};
    REQUIRE_THROWS_AS(integrate_geodesic(p, s0, 1.0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(integrate_geodesic(p, s0, 0.0, 1e-10), std::invalid_argument);
    REQUIRE_THROWS_AS(integrate_geodesic(p, {ParamPoint(5, 0), Vec2(1, 0)}, 1.0, 1e-10),
                      std::domain_error);
}

TEST_CASE("integration stops cleanly near a singular chart rim") {
    // The hemisphere graph degenerates at the equator rho -> 1; a geodesic
    // shot at the rim must truncate with a reason instead of hanging.
    const GraphPatch p(1.0, 1.0, sphere_remainder_field(1.0),
                       Domain{-0.9999, 0.9999, -0.9999, 0.9999});
    const SampledCurve c = integrate_geodesic(p, {ParamPoint(0.9, 0.0), Vec2(1, 0)}, 0.5, 1e-10);
    REQUIRE(c.exit != SampledCurve::Exit::completed);
    REQUIRE(!c.nodes.empty());
    for (const CurveNode& n : c.nodes) REQUIRE(n.u.finite());
}

TEST_CASE("sampled nodes sit on the surface") {
    const SpherePatch sphere(1.0);
    const SampledCurve c =
        integrate_geodesic(sphere, {ParamPoint(0.2, 0.1), Vec2(0.8, 0.3)}, 1.0, 1e-10);
    double prev = -1e300;
    for (const CurveNode& n : c.nodes) {
        REQUIRE(n.t > prev);
        prev = n.t;
        REQUIRE((n.x - sphere.eval(n.u)).norm() <= 1e-12);
    }
}

TEST_CASE("geodesic curvature vanishes along integrated geodesics") {
    const SpherePatch sphere(1.0);
    const SampledCurve c =
        integrate_geodesic(sphere, {ParamPoint(0.2, 0.1), Vec2(0.8, 0.3)}, 1.5, 1e-12, 151);
    for (double t : {0.2, 0.5, 0.75, 1.1, 1.3})
        REQUIRE(std::abs(geodesic_curvature(sphere, c, t)) <= 1e-6);
}

namespace {

// Latitude circle on the unit sphere sampled uniformly in longitude.
SampledCurve latitude_circle(const SpherePatch& sphere, double lat, int n, double span = 2.0) {
    SampledCurve c;
    c.has_param = true;
    for (int i = 0; i < n; ++i) {
        const double t = -0.5 * span + span * i / (n - 1);
        const ParamPoint u(t, lat);
        c.nodes.push_back(CurveNode{t, u, sphere.eval(u), Vec2(1, 0)});
    }
    return c;
}

// Independent ambient-space oracle for the latitude circle: project the
// ambient acceleration onto the tangent plane, drop the tangential part,
// and divide by the squared speed.
double latitude_circle_kappa_ambient(double lat) {
    const double t = 0.0;
    const Vec3 gamma(std::cos(lat) * std::cos(t), std::cos(lat) * std::sin(t), std::sin(lat));
    const Vec3 d1(-std::cos(lat) * std::sin(t), std::cos(lat) * std::cos(t), 0.0);
    const Vec3 d2(-std::cos(lat) * std::cos(t), -std::cos(lat) * std::sin(t), 0.0);
    const Vec3 n = gamma;  // unit sphere normal
    Vec3 w = d2 - d2.dot(n) * n;
    const Vec3 that = d1.normalized();
    w -= w.dot(that) * that;
    return w.norm() / d1.squaredNorm();
}

}  // namespace

TEST_CASE("latitude circle geodesic curvature matches the classical value") {
    const SpherePatch sphere(1.0);
    // Colatitude 45 degrees = latitude pi/4; kappa_g = cot(pi/4) = 1.
    const SampledCurve c45 = latitude_circle(sphere, 0.25 * M_PI, 201);
    REQUIRE(geodesic_curvature(sphere, c45, 0.0) == Approx(1.0).margin(1e-4));

    const double lat = 0.3;
    const SampledCurve c = latitude_circle(sphere, lat, 201);
    const double oracle = latitude_circle_kappa_ambient(lat);
    REQUIRE(oracle == Approx(std::tan(lat)).epsilon(1e-12));
    REQUIRE(geodesic_curvature(sphere, c, 0.0) == Approx(oracle).margin(1e-6));
}

TEST_CASE("geodesic curvature is parametrization invariant") {
    const SpherePatch sphere(1.0);

    // A geodesic resampled under t -> t^3 (away from 0) stays flagged as one.
    const GeodesicState s0{ParamPoint(0.1, -0.1), Vec2(0.7, 0.4)};
    std::vector<double> times = {0.0};
    const int n = 41;
    for (int i = 0; i < n; ++i) {
        const double tau = 0.6 + 0.8 * i / (n - 1);
        times.push_back(tau * tau * tau);
    }
    const SampledCurve raw = integrate_geodesic_at(sphere, s0, times, 1e-12);
    SampledCurve reparam;
    reparam.has_param = true;
    for (int i = 0; i < n; ++i) {
        CurveNode node = raw.nodes[i + 1];
        node.t = 0.6 + 0.8 * i / (n - 1);
        reparam.nodes.push_back(node);
    }
    const SampledCurve uniform = integrate_geodesic(sphere, s0, 2.0, 1e-12, 201);
    const double kg_uniform = geodesic_curvature(sphere, uniform, 1.0);
    const double kg_reparam = geodesic_curvature(sphere, reparam, 1.0);
    REQUIRE(std::abs(kg_uniform) <= 1e-6);
    REQUIRE(std::abs(kg_reparam - kg_uniform) <= 1e-6);

    // Same invariance on a non-geodesic (latitude circle at lat 0.3).
    const double lat = 0.3;
    SampledCurve circ;
    circ.has_param = true;
    for (int i = 0; i < n; ++i) {
        const double tau = 0.6 + 0.8 * i / (n - 1);
        const double lon = tau * tau * tau - 1.0;
        const ParamPoint u(lon, lat);
        circ.nodes.push_back(CurveNode{tau, u, sphere.eval(u), Vec2()});
    }
    const double kg_circ = geodesic_curvature(sphere, circ, 1.0);
    REQUIRE(std::abs(kg_circ - std::tan(lat)) <= 1e-6);
}

TEST_CASE("geodesic curvature between nodes uses local resampling") {
    const SpherePatch sphere(1.0);
    const double lat = 0.3;
    const SampledCurve c = latitude_circle(sphere, lat, 201);
    for (double t : {0.503, 0.5001, -0.2137, 0.0053})
        REQUIRE(geodesic_curvature(sphere, c, t) == Approx(std::tan(lat)).margin(1e-8));
}

TEST_CASE("geodesic curvature input validation") {
    const SpherePatch sphere(1.0);
    SampledCurve tiny = latitude_circle(sphere, 0.2, 4);
    REQUIRE_THROWS_AS(geodesic_curvature(sphere, tiny, 0.0), std::invalid_argument);
    SampledCurve c = latitude_circle(sphere, 0.2, 21);
    REQUIRE_THROWS_AS(geodesic_curvature(sphere, c, c.nodes.front().t), std::invalid_argument);
}

TEST_CASE("deflection ratio limit") {
    const std::vector<double> scales = {0.1, 0.05, 0.025};

    const LimitEstimate a12 = deflection_ratio_limit(1.0, 2.0, zero_field(), scales);
    REQUIRE(a12.ok);
    REQUIRE(a12.extrapolated == Approx(-2.0).margin(1e-3));
    REQUIRE(a12.fit_order >= 1.0);

    const LimitEstimate a03 = deflection_ratio_limit(0.0, 3.0, zero_field(), scales);
    REQUIRE(a03.ok);
    REQUIRE(a03.extrapolated == Approx(0.0).margin(1e-12));

    // h = (1/4) a1 a2^2 u1^2 u2^2 with a1 = a2 = 1; same limit as the exact
    // sphere remainder.
    const LimitEstimate hq = deflection_ratio_limit(1.0, 1.0, quartic_cross_field(0.25), scales);
    REQUIRE(hq.ok);
    REQUIRE(hq.extrapolated == Approx(-1.0).margin(1e-3));
    const LimitEstimate hs = deflection_ratio_limit(1.0, 1.0, sphere_remainder_field(1.0), scales,
                                                    Domain{-0.6, 0.6, -0.6, 0.6});
    REQUIRE(hs.extrapolated == Approx(-1.0).margin(1e-3));
    REQUIRE(hq.extrapolated == Approx(hs.extrapolated).margin(1e-4));
}

TEST_CASE("richardson extrapolation handles edge cases") {
    const LimitEstimate bad = richardson_extrapolate({{0.1, 1.0}, {0.05, 2.0}, {0.025, 1.5}});
    REQUIRE_FALSE(bad.ok);

    const LimitEstimate exact = richardson_extrapolate({{0.1, 3.0}, {0.05, 3.0}, {0.025, 3.0}});
    REQUIRE(exact.ok);
    REQUIRE(exact.extrapolated == Approx(3.0));
    REQUIRE(std::isinf(exact.fit_order));

    // Quadratic model data extrapolates to the exact limit.
    auto model = [](double s) { return -2.0 + 0.7 * s * s; };
    const LimitEstimate quad =
        richardson_extrapolate({{0.1, model(0.1)}, {0.05, model(0.05)}, {0.025, model(0.025)}});
    REQUIRE(quad.ok);
    REQUIRE(quad.extrapolated == Approx(-2.0).epsilon(1e-12));
    REQUIRE(quad.fit_order == Approx(2.0).margin(1e-6));

    REQUIRE_THROWS_AS(richardson_extrapolate({{0.1, 1.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(richardson_extrapolate({{0.05, 1.0}, {0.1, 2.0}}), std::invalid_argument);
}
