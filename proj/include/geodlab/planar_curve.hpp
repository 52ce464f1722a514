#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "numerics.hpp"
#include "types.hpp"

namespace geodlab {

// Regular plane curve c(t) with analytic derivatives to order 2 (order 3
// optional). Closed curves are periodic over [t_min, t_max].
class PlanarCurve {
public:
    virtual ~PlanarCurve() = default;
    virtual Vec2 eval(double t) const = 0;
    virtual Vec2 d1(double t) const = 0;
    virtual Vec2 d2(double t) const = 0;
    virtual Vec2 d3(double) const {
        throw std::logic_error("PlanarCurve: third derivative not available");
    }
    virtual bool has_d3() const { return false; }
    virtual double t_min() const = 0;
    virtual double t_max() const = 0;
    virtual bool closed() const = 0;
};

using PlanarCurvePtr = std::shared_ptr<const PlanarCurve>;

class CircleCurve final : public PlanarCurve {
public:
    explicit CircleCurve(double radius, Vec2 center = Vec2::Zero())
        : r_(radius), c_(center) {
        if (radius <= 0.0) throw std::invalid_argument("CircleCurve: radius must be positive");
    }
    Vec2 eval(double t) const override { return c_ + r_ * Vec2(std::cos(t), std::sin(t)); }
    Vec2 d1(double t) const override { return r_ * Vec2(-std::sin(t), std::cos(t)); }
    Vec2 d2(double t) const override { return r_ * Vec2(-std::cos(t), -std::sin(t)); }
    Vec2 d3(double t) const override { return r_ * Vec2(std::sin(t), -std::cos(t)); }
    bool has_d3() const override { return true; }
    double t_min() const override { return 0.0; }
    double t_max() const override { return 2.0 * M_PI; }
    bool closed() const override { return true; }
    double radius() const { return r_; }

private:
    double r_;
    Vec2 c_;
};

// (alpha cos t, beta sin t), counterclockwise.
class EllipseCurve final : public PlanarCurve {
public:
    EllipseCurve(double alpha, double beta) : a_(alpha), b_(beta) {
        if (alpha <= 0.0 || beta <= 0.0)
            throw std::invalid_argument("EllipseCurve: semi-axes must be positive");
    }
    Vec2 eval(double t) const override { return Vec2(a_ * std::cos(t), b_ * std::sin(t)); }
    Vec2 d1(double t) const override { return Vec2(-a_ * std::sin(t), b_ * std::cos(t)); }
    Vec2 d2(double t) const override { return Vec2(-a_ * std::cos(t), -b_ * std::sin(t)); }
    Vec2 d3(double t) const override { return Vec2(a_ * std::sin(t), -b_ * std::cos(t)); }
    bool has_d3() const override { return true; }
    double t_min() const override { return 0.0; }
    double t_max() const override { return 2.0 * M_PI; }
    bool closed() const override { return true; }
    double alpha() const { return a_; }
    double beta() const { return b_; }

private:
    double a_, b_;
};

// Wraps a bare point evaluator as a PlanarCurve with 5-point stencil
// derivatives. Used for curves only available pointwise (variable-radius
// offsets, whose analytic derivatives would need third base derivatives).
class StencilCurve final : public PlanarCurve {
public:
    StencilCurve(std::function<Vec2(double)> f, double t_lo, double t_hi, bool is_closed,
                 double step = 1e-4)
        : f_(std::move(f)), lo_(t_lo), hi_(t_hi), closed_(is_closed), h_(step) {}

    Vec2 eval(double t) const override { return f_(t); }
    Vec2 d1(double t) const override {
        return (f_(t - 2 * h_) - 8.0 * f_(t - h_) + 8.0 * f_(t + h_) - f_(t + 2 * h_)) /
               (12.0 * h_);
    }
    Vec2 d2(double t) const override {
        return (-f_(t - 2 * h_) + 16.0 * f_(t - h_) - 30.0 * f_(t) + 16.0 * f_(t + h_) -
                f_(t + 2 * h_)) /
               (12.0 * h_ * h_);
    }
    double t_min() const override { return lo_; }
    double t_max() const override { return hi_; }
    bool closed() const override { return closed_; }

private:
    std::function<Vec2(double)> f_;
    double lo_, hi_;
    bool closed_;
    double h_;
};

inline Vec2 unit_tangent(const PlanarCurve& c, double t) {
    const Vec2 v = c.d1(t);
    const double n = v.norm();
    if (n <= 0.0) throw std::domain_error("planar curve not regular at t");
    return v / n;
}

// Outward normal of a counterclockwise closed convex curve: tangent rotated
// by -90 degrees.
inline Vec2 outward_normal(const PlanarCurve& c, double t) {
    const Vec2 tv = unit_tangent(c, t);
    return Vec2(tv.y(), -tv.x());
}

// Signed curvature (x'y'' - y'x'') / |c'|^3; positive for counterclockwise
// convex curves.
inline double planar_curvature(const PlanarCurve& c, double t) {
    const Vec2 v = c.d1(t);
    const Vec2 a = c.d2(t);
    const double speed = v.norm();
    if (speed <= 0.0) throw std::domain_error("planar curve not regular at t");
    return (v.x() * a.y() - v.y() * a.x()) / (speed * speed * speed);
}

// Arclength from t0 to t1 by adaptive quadrature of |c'|.
inline double arclength(const PlanarCurve& c, double t0, double t1, double tol = 1e-12) {
    return adaptive_simpson([&c](double t) { return c.d1(t).norm(); }, t0, t1, tol);
}

// Invert s = arclength(c, t_ref, t) for t on [t_lo, t_hi].
inline double arclength_inverse(const PlanarCurve& c, double t_ref, double s, double t_lo,
                                double t_hi, double tol = 1e-13) {
    return bisect([&](double t) { return arclength(c, t_ref, t) - s; }, t_lo, t_hi, tol);
}

// Offset curve C(t) = c(t) + r(t) n(t), n the outward unit normal.
struct OffsetCurveSpec {
    PlanarCurvePtr base;
    std::function<double(double)> r_of_t;
};

inline OffsetCurveSpec constant_offset(PlanarCurvePtr base, double r) {
    if (r < 0.0) throw std::invalid_argument("offset distance must be non-negative");
    return OffsetCurveSpec{std::move(base), [r](double) { return r; }};
}

// r(t) = k / a(t) with a the signed curvature of the base curve.
inline OffsetCurveSpec curvature_proportional_offset(PlanarCurvePtr base, double k) {
    if (k < 0.0) throw std::invalid_argument("offset coefficient must be non-negative");
    auto b = base;
    return OffsetCurveSpec{b, [b, k](double t) {
                               const double a = planar_curvature(*b, t);
                               if (a <= 0.0)
                                   throw std::domain_error(
                                       "curvature-proportional offset needs convex base");
                               return k / a;
                           }};
}

inline Vec2 planar_offset_curve(const OffsetCurveSpec& spec, double t) {
    return spec.base->eval(t) + spec.r_of_t(t) * outward_normal(*spec.base, t);
}

inline StencilCurve offset_as_curve(const OffsetCurveSpec& spec, double step = 1e-4) {
    return StencilCurve([spec](double t) { return planar_offset_curve(spec, t); },
                        spec.base->t_min(), spec.base->t_max(), spec.base->closed(), step);
}

// Rate at which the offset point advances along the matched base tangent,
// per unit base arclength: (dC/dt . T) / |c'|. This is the osculating-circle
// arclength rate; it equals 1 + a(t) r(t) for any offset, measured here by
// stencil differentiation of the offset map.
inline double offset_tangential_rate(const OffsetCurveSpec& spec, double t, double h = 1e-3) {
    std::array<Vec2, 5> samples;
    for (int j = -2; j <= 2; ++j) samples[j + 2] = planar_offset_curve(spec, t + j * h);
    const Vec2 dC = (samples[0] - 8.0 * samples[1] + 8.0 * samples[3] - samples[4]) / (12.0 * h);
    const Vec2 v = spec.base->d1(t);
    return dC.dot(v) / v.squaredNorm();
}

struct ConvexityResult {
    bool convex = false;
    double min_curvature = 0.0;
    double max_curvature = 0.0;
};

// Samples the signed curvature; convex iff it never changes sign.
inline ConvexityResult convexity_check(const PlanarCurve& c, int grid = 256) {
    if (grid < 64) throw std::invalid_argument("convexity_check: grid must be >= 64");
    const double lo = c.t_min(), hi = c.t_max();
    const int n = c.closed() ? grid : grid + 1;  // closed curves skip the duplicate endpoint
    double kmin = std::numeric_limits<double>::infinity();
    double kmax = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double t = lo + (hi - lo) * double(i) / grid;
        const double k = planar_curvature(c, t);
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
    }
    return ConvexityResult{!(kmin < 0.0 && kmax > 0.0), kmin, kmax};
}

struct CurveFoot {
    double t = 0.0;
    Vec2 point = Vec2::Zero();
    double distance = 0.0;
    bool multivalued = false;
    std::vector<double> candidate_ts;  // parameters of near-optimal distinct feet
};

// Nearest point on a (possibly only pointwise-evaluable) closed curve.
// Dense grid scan, golden-section polish of each local minimum, and a
// multi-valued warning when two distinct feet tie within 1e-6 relative.
inline CurveFoot nearest_on_curve(const std::function<Vec2(double)>& f, double t_lo, double t_hi,
                                  bool closed, const Vec2& query, int grid = 2048) {
    const double span = t_hi - t_lo;
    const double dt = span / grid;
    std::vector<double> dist(grid);
    for (int i = 0; i < grid; ++i) dist[i] = (f(t_lo + i * dt) - query).norm();

    auto at = [&](int i) {
        if (closed) return dist[((i % grid) + grid) % grid];
        return dist[std::min(std::max(i, 0), grid - 1)];
    };

    std::vector<int> minima;
    for (int i = 0; i < grid; ++i) {
        if (!closed && (i == 0 || i == grid - 1)) {
            if ((i == 0 && dist[0] <= at(1)) || (i == grid - 1 && dist[i] <= at(i - 1)))
                minima.push_back(i);
            continue;
        }
        if (dist[i] <= at(i - 1) && dist[i] < at(i + 1)) minima.push_back(i);
    }
    if (minima.empty()) minima.push_back(int(std::min_element(dist.begin(), dist.end()) - dist.begin()));

    struct Cand {
        double t, d;
    };
    std::vector<Cand> cands;
    for (int idx : minima) {
        const double a = t_lo + (idx - 1) * dt;
        const double b = t_lo + (idx + 1) * dt;
        const double t = golden_minimize([&](double s) { return (f(s) - query).squaredNorm(); },
                                         a, b, 1e-13 * std::max(1.0, span));
        cands.push_back({t, (f(t) - query).norm()});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.d < b.d; });

    CurveFoot foot;
    foot.t = cands.front().t;
    foot.point = f(foot.t);
    foot.distance = cands.front().d;
    const double scale = std::max(foot.distance, 1e-30);
    for (std::size_t i = 1; i < cands.size(); ++i) {
        const bool tied = (cands[i].d - foot.distance) < 1e-6 * scale;
        double sep = std::abs(cands[i].t - foot.t);
        if (closed) sep = std::min(sep, span - sep);
        const bool distinct = sep > 3.0 * dt || (f(cands[i].t) - foot.point).norm() > 1e-6 * (1.0 + scale);
        if (tied && distinct) {
            foot.multivalued = true;
            foot.candidate_ts.push_back(cands[i].t);
        }
    }
    return foot;
}

inline CurveFoot nearest_on_curve(const PlanarCurve& c, const Vec2& query, int grid = 2048) {
    return nearest_on_curve([&c](double t) { return c.eval(t); }, c.t_min(), c.t_max(),
                            c.closed(), query, grid);
}

}  // namespace geodlab
