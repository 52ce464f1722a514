#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "planar_curve.hpp"
#include "scalar_field.hpp"
#include "types.hpp"

namespace geodlab {

// Parametric surface patch S: domain -> R^3 with analytic partial
// derivatives. partial(i, j) is d^{i+j} S / du1^i du2^j; patches supply
// orders 1 and 2, and order 3 where the construction allows it.
// Parametrizations are oriented so that dS/du1 x dS/du2 points outward
// (upward, for graph patches).
class SurfacePatch {
public:
    virtual ~SurfacePatch() = default;

    virtual Domain domain() const = 0;
    virtual bool has_d3() const { return false; }

    // Windows the foot-point solver may run Newton in separately; a single
    // window (the whole domain) unless curvature jumps inside the chart.
    virtual std::vector<Domain> newton_subdomains() const { return {domain()}; }

    Vec3 eval(const ParamPoint& u) const {
        if (!domain().contains(u, eval_pad())) throw std::domain_error("SurfacePatch: parameter outside domain");
        return partial(0, 0, domain().wrap(u));
    }

    Vec3 d1(const ParamPoint& u, int a) const { return partial(a == 0 ? 1 : 0, a == 0 ? 0 : 1, domain().wrap(u)); }

    Vec3 d2(const ParamPoint& u, int a, int b) const {
        const int i = (a == 0) + (b == 0);
        return partial(i, 2 - i, domain().wrap(u));
    }

    Vec3 d3(const ParamPoint& u, int a, int b, int c) const {
        if (!has_d3()) throw std::logic_error("SurfacePatch: third partials not available");
        const int i = (a == 0) + (b == 0) + (c == 0);
        return partial(i, 3 - i, domain().wrap(u));
    }

    // Unit outward normal from the first partials.
    Vec3 unit_normal(const ParamPoint& u) const {
        const Vec3 w = d1(u, 0).cross(d1(u, 1));
        const double n = w.norm();
        if (n <= 0.0) throw std::runtime_error("SurfacePatch: degenerate tangent plane");
        return w / n;
    }

protected:
    virtual Vec3 partial(int i, int j, const ParamPoint& u) const = 0;
    virtual double eval_pad() const {
        const Domain d = domain();
        return 1e-9 * std::max(d.span_u1(), d.span_u2());
    }
};

using SurfacePatchPtr = std::shared_ptr<const SurfacePatch>;

namespace detail {
// j-th derivatives of cos and sin.
inline double dcos(int j, double x) {
    switch (j & 3) {
        case 0: return std::cos(x);
        case 1: return -std::sin(x);
        case 2: return -std::cos(x);
        default: return std::sin(x);
    }
}
inline double dsin(int j, double x) {
    switch (j & 3) {
        case 0: return std::sin(x);
        case 1: return std::cos(x);
        case 2: return -std::sin(x);
        default: return -std::cos(x);
    }
}
}  // namespace detail

// Graph patch S(u) = (u1, u2, -1/2 (a1 u1^2 + a2 u2^2) - h(u)); the tangent
// plane at the origin is z = 0 and a1, a2 are the principal curvatures there.
class GraphPatch final : public SurfacePatch {
public:
    GraphPatch(double a1, double a2, ScalarFieldPtr h, Domain dom = default_domain())
        : a1_(a1), a2_(a2), h_(std::move(h)), dom_(dom) {
        if (a1 < 0.0 || a2 < 0.0)
            throw std::invalid_argument("GraphPatch: principal curvatures must be non-negative");
        if (!h_) throw std::invalid_argument("GraphPatch: null remainder field");
        check_remainder();
    }

    GraphPatch(double a1, double a2, double quartic_coeff = 0.0, Domain dom = default_domain())
        : GraphPatch(a1, a2,
                     quartic_coeff == 0.0 ? zero_field() : quartic_cross_field(quartic_coeff),
                     dom) {}

    static Domain default_domain() { return Domain{-2.0, 2.0, -2.0, 2.0, false, false}; }

    Domain domain() const override { return dom_; }
    bool has_d3() const override { return true; }

    double a1() const { return a1_; }
    double a2() const { return a2_; }
    const ScalarField& h() const { return *h_; }

    // Height partials f = -1/2(a1 u1^2 + a2 u2^2) - h.
    double height_partial(int i, int j, const ParamPoint& u) const {
        double quad = 0.0;
        if (i == 0 && j == 0) quad = 0.5 * (a1_ * u.u1 * u.u1 + a2_ * u.u2 * u.u2);
        else if (i == 1 && j == 0) quad = a1_ * u.u1;
        else if (i == 2 && j == 0) quad = a1_;
        else if (i == 0 && j == 1) quad = a2_ * u.u2;
        else if (i == 0 && j == 2) quad = a2_;
        return -quad - h_->partial(i, j, u);
    }

protected:
    Vec3 partial(int i, int j, const ParamPoint& u) const override {
        if (i == 0 && j == 0) return Vec3(u.u1, u.u2, height_partial(0, 0, u));
        Vec3 v(0.0, 0.0, height_partial(i, j, u));
        if (i == 1 && j == 0) v.x() = 1.0;
        if (i == 0 && j == 1) v.y() = 1.0;
        return v;
    }

private:
    void check_remainder() const {
        const ParamPoint o(0.0, 0.0);
        for (int i = 0; i <= 2; ++i)
            for (int j = 0; i + j <= 2; ++j)
                if (std::abs(h_->partial(i, j, o)) > 1e-12)
                    throw std::invalid_argument(
                        "GraphPatch: remainder must vanish to second order at the origin");
    }

    double a1_, a2_;
    ScalarFieldPtr h_;
    Domain dom_;
};

// z_i = a_i u_i + d_i h: height-gradient fields of a graph patch (the graph
// partials are dS/du_i = (.., .., -z_i)).
inline Vec2 z_fields(const GraphPatch& p, const ParamPoint& u) {
    return Vec2(p.a1() * u.u1 + p.h().partial(1, 0, u), p.a2() * u.u2 + p.h().partial(0, 1, u));
}

// Sphere chart in longitude/latitude about a configurable pole axis; the
// poles are excluded from the domain.
class SpherePatch final : public SurfacePatch {
public:
    explicit SpherePatch(double radius, Vec3 center = Vec3::Zero(), int pole_axis = 2,
                         double max_latitude = 1.45)
        : r_(radius), c_(center), max_lat_(max_latitude) {
        if (radius <= 0.0) throw std::invalid_argument("SpherePatch: radius must be positive");
        switch (pole_axis) {
            case 0: ex_ = Vec3(0, 1, 0); ey_ = Vec3(0, 0, 1); ez_ = Vec3(1, 0, 0); break;
            case 1: ex_ = Vec3(0, 0, 1); ey_ = Vec3(1, 0, 0); ez_ = Vec3(0, 1, 0); break;
            case 2: ex_ = Vec3(1, 0, 0); ey_ = Vec3(0, 1, 0); ez_ = Vec3(0, 0, 1); break;
            default: throw std::invalid_argument("SpherePatch: pole_axis must be 0, 1, or 2");
        }
    }

    Domain domain() const override { return Domain{-M_PI, M_PI, -max_lat_, max_lat_, true, false}; }
    bool has_d3() const override { return true; }
    double radius() const { return r_; }
    Vec3 center() const { return c_; }

protected:
    Vec3 partial(int i, int j, const ParamPoint& u) const override {
        using detail::dcos;
        using detail::dsin;
        const Vec3 p_i = dcos(i, u.u1) * ex_ + dsin(i, u.u1) * ey_;
        Vec3 m = dcos(j, u.u2) * p_i;
        if (i == 0) m += dsin(j, u.u2) * ez_;
        return (i == 0 && j == 0) ? c_ + r_ * m : Vec3(r_ * m);
    }

private:
    double r_;
    Vec3 c_;
    double max_lat_;
    Vec3 ex_, ey_, ez_;
};

// Round cylinder of radius R about the x3-axis: (R cos u1, R sin u1, u2).
class RoundCylinderPatch final : public SurfacePatch {
public:
    explicit RoundCylinderPatch(double radius, double z_min = -10.0, double z_max = 10.0)
        : r_(radius), z_min_(z_min), z_max_(z_max) {
        if (radius <= 0.0) throw std::invalid_argument("RoundCylinderPatch: radius must be positive");
    }

    Domain domain() const override { return Domain{-M_PI, M_PI, z_min_, z_max_, true, false}; }
    bool has_d3() const override { return true; }
    double radius() const { return r_; }

protected:
    Vec3 partial(int i, int j, const ParamPoint& u) const override {
        using detail::dcos;
        using detail::dsin;
        if (j >= 2 || (j == 1 && i > 0)) return Vec3::Zero();
        if (j == 1) return Vec3(0, 0, 1);
        Vec3 v(r_ * dcos(i, u.u1), r_ * dsin(i, u.u1), 0.0);
        if (i == 0) v.z() = u.u2;
        return v;
    }

private:
    double r_, z_min_, z_max_;
};

// Generalized cylinder over a closed convex plane profile: (c(u1), u2).
class EllipticCylinderPatch final : public SurfacePatch {
public:
    explicit EllipticCylinderPatch(PlanarCurvePtr profile, double z_min = -10.0,
                                   double z_max = 10.0)
        : profile_(std::move(profile)), z_min_(z_min), z_max_(z_max) {
        if (!profile_ || !profile_->closed())
            throw std::invalid_argument("EllipticCylinderPatch: closed profile required");
    }

    Domain domain() const override {
        return Domain{profile_->t_min(), profile_->t_max(), z_min_, z_max_, true, false};
    }
    bool has_d3() const override { return profile_->has_d3(); }
    const PlanarCurve& profile() const { return *profile_; }

protected:
    Vec3 partial(int i, int j, const ParamPoint& u) const override {
        if (j >= 2 || (j == 1 && i > 0)) return Vec3::Zero();
        if (j == 1) return Vec3(0, 0, 1);
        Vec2 c;
        switch (i) {
            case 0: c = profile_->eval(u.u1); break;
            case 1: c = profile_->d1(u.u1); break;
            case 2: c = profile_->d2(u.u1); break;
            default: c = profile_->d3(u.u1); break;
        }
        return Vec3(c.x(), c.y(), i == 0 ? u.u2 : 0.0);
    }

private:
    PlanarCurvePtr profile_;
    double z_min_, z_max_;
};

// Round cylinder of radius R (x3 in [0, height]) closed below by a
// hemisphere of radius R about the origin. Chart (u1, s) with u1 the angle
// and s the meridian arclength; s >= 0 is the cylinder, s < 0 the cap. The
// surface is C^1 with a bounded jump in the second derivatives at s = 0, so
// Newton-based solvers treat the two sides as separate windows.
class CappedCylinderPatch final : public SurfacePatch {
public:
    explicit CappedCylinderPatch(double radius, double height = M_PI)
        : r_(radius), h_(height) {
        if (radius <= 0.0) throw std::invalid_argument("CappedCylinderPatch: radius must be positive");
    }

    Domain domain() const override {
        return Domain{-M_PI, M_PI, -0.5 * M_PI * r_, h_, true, false};
    }

    std::vector<Domain> newton_subdomains() const override {
        return {Domain{-M_PI, M_PI, 0.0, h_, true, false},
                Domain{-M_PI, M_PI, -0.5 * M_PI * r_, 0.0, true, false}};
    }

    double radius() const { return r_; }

protected:
    Vec3 partial(int i, int j, const ParamPoint& u) const override {
        using detail::dcos;
        using detail::dsin;
        if (u.u2 >= 0.0) {
            if (j >= 2 || (j == 1 && i > 0)) return Vec3::Zero();
            if (j == 1) return Vec3(0, 0, 1);
            Vec3 v(r_ * dcos(i, u.u1), r_ * dsin(i, u.u1), 0.0);
            if (i == 0) v.z() = u.u2;
            return v;
        }
        // Cap: sphere chart at latitude v = s / r, z-pole frame; each
        // s-derivative carries a 1/r chain factor.
        const double v = u.u2 / r_;
        const Vec3 p_i(dcos(i, u.u1), dsin(i, u.u1), 0.0);
        Vec3 m = dcos(j, v) * p_i;
        if (i == 0) m += dsin(j, v) * Vec3(0, 0, 1);
        return r_ * std::pow(1.0 / r_, j) * m;
    }

private:
    double r_, h_;
};

}  // namespace geodlab
