#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "forms.hpp"
#include "numerics.hpp"
#include "surface_patch.hpp"
#include "types.hpp"

namespace geodlab {

struct GeodesicState {
    ParamPoint u;
    Vec2 v = Vec2::Zero();  // parameter-space velocity
};

struct GeodesicRhs {
    Vec2 velocity;
    Vec2 acceleration;
};

// Right-hand side of the geodesic equations: a_k = -Gamma^k_ij v_i v_j.
inline GeodesicRhs geodesic_rhs(const SurfacePatch& p, const GeodesicState& s) {
    const Christoffel ch = christoffel(p, s.u);
    Vec2 a = Vec2::Zero();
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) a[k] -= ch.gamma[k][i][j] * s.v[i] * s.v[j];
    return GeodesicRhs{s.v, a};
}

struct CurveNode {
    double t = 0.0;
    ParamPoint u;
    Vec3 x = Vec3::Zero();
    Vec2 v = Vec2::Zero();  // parameter velocity, when known
};

struct SampledCurve {
    enum class Exit { completed, left_domain, stiffness };

    std::vector<CurveNode> nodes;
    Exit exit = Exit::completed;
    bool has_velocity = false;
    bool has_param = true;       // false for bare ambient polylines
    bool multivalued = false;    // set when a projection step saw tied feet

    std::size_t size() const { return nodes.size(); }

    static SampledCurve from_ambient(const std::vector<double>& ts, const std::vector<Vec3>& xs) {
        if (ts.size() != xs.size()) throw std::invalid_argument("from_ambient: size mismatch");
        SampledCurve c;
        c.has_param = false;
        for (std::size_t i = 0; i < ts.size(); ++i)
            c.nodes.push_back(CurveNode{ts[i], ParamPoint(0, 0), xs[i], Vec2::Zero()});
        return c;
    }
};

namespace detail {

using State4 = Eigen::Vector4d;

inline State4 pack(const GeodesicState& s) { return State4(s.u.u1, s.u.u2, s.v.x(), s.v.y()); }
inline GeodesicState unpack(const State4& y) {
    return GeodesicState{ParamPoint(y[0], y[1]), Vec2(y[2], y[3])};
}

// Dormand-Prince 5(4) embedded pair; the geodesic flow is autonomous, so
// only the stage weights are needed.
struct Dopri5 {
    const SurfacePatch& patch;

    State4 f(const State4& y) const {
        const GeodesicRhs r = geodesic_rhs(patch, unpack(y));
        return State4(r.velocity.x(), r.velocity.y(), r.acceleration.x(), r.acceleration.y());
    }

    // One trial step; returns 5th-order solution and the embedded error.
    void step(const State4& y, const State4& k1, double h, State4& y5, State4& err,
              State4& k7) const {
        const State4 k2 = f(y + h * (1.0 / 5) * k1);
        const State4 k3 = f(y + h * ((3.0 / 40) * k1 + (9.0 / 40) * k2));
        const State4 k4 = f(y + h * ((44.0 / 45) * k1 + (-56.0 / 15) * k2 + (32.0 / 9) * k3));
        const State4 k5 = f(y + h * ((19372.0 / 6561) * k1 + (-25360.0 / 2187) * k2 +
                                     (64448.0 / 6561) * k3 + (-212.0 / 729) * k4));
        const State4 k6 = f(y + h * ((9017.0 / 3168) * k1 + (-355.0 / 33) * k2 +
                                     (46732.0 / 5247) * k3 + (49.0 / 176) * k4 +
                                     (-5103.0 / 18656) * k5));
        y5 = y + h * ((35.0 / 384) * k1 + (500.0 / 1113) * k3 + (125.0 / 192) * k4 +
                      (-2187.0 / 6784) * k5 + (11.0 / 84) * k6);
        k7 = f(y5);
        const State4 y4 = y + h * ((5179.0 / 57600) * k1 + (7571.0 / 16695) * k3 +
                                   (393.0 / 640) * k4 + (-92097.0 / 339200) * k5 +
                                   (187.0 / 2100) * k6 + (1.0 / 40) * k7);
        err = y5 - y4;
    }
};

}  // namespace detail

// Adaptive integration of the geodesic flow, reporting the state at the
// given output times. times must start at 0 and be strictly monotone
// (ascending or descending). Local error is kept below tol per unit time.
inline SampledCurve integrate_geodesic_at(const SurfacePatch& p, const GeodesicState& s0,
                                          const std::vector<double>& times, double tol = 1e-10) {
    if (tol <= 0.0) throw std::invalid_argument("integrate_geodesic: tol must be positive");
    if (times.empty() || times.front() != 0.0)
        throw std::invalid_argument("integrate_geodesic: times must start at 0");
    const double dir = times.size() > 1 ? (times.back() > 0.0 ? 1.0 : -1.0) : 1.0;
    const Domain dom = p.domain();
    if (!dom.contains(s0.u)) throw std::domain_error("integrate_geodesic: start outside domain");

    detail::Dopri5 rk{p};
    SampledCurve out;
    out.has_velocity = true;

    detail::State4 y = detail::pack(s0);
    auto record = [&](double t) {
        const GeodesicState s = detail::unpack(y);
        out.nodes.push_back(CurveNode{t, dom.wrap(s.u), p.eval(s.u), s.v});
    };
    record(times.front());

    const double t_total = std::abs(times.back());
    const double h_min = std::max(1e-14, 1e-12 * std::max(1.0, t_total));
    double t = 0.0;
    double h = dir * std::min(0.01, std::max(t_total / 10.0, 1e-6));
    detail::State4 k1 = rk.f(y);

    for (std::size_t target = 1; target < times.size(); ++target) {
        const double t_goal = times[target];
        if (!(dir * (t_goal - times[target - 1]) > 0.0))
            throw std::invalid_argument("integrate_geodesic: times must be strictly monotone");
        while (dir * (t_goal - t) > 0.0) {
            if (std::abs(h) < h_min) {
                out.exit = SampledCurve::Exit::stiffness;
                return out;
            }
            double h_try = h;
            bool hits_goal = false;
            if (dir * (t + h_try - t_goal) >= 0.0) {
                h_try = t_goal - t;
                hits_goal = true;
            }
            if (hits_goal && std::abs(h_try) < h_min) {
                // Sub-roundoff remainder of a previously capped step.
                t = t_goal;
                break;
            }
            detail::State4 y5, err, k7;
            bool eval_failed = false;
            try {
                rk.step(y, k1, h_try, y5, err, k7);
            } catch (const std::exception&) {
                eval_failed = true;
            }
            const bool finite = !eval_failed && y5.allFinite() && err.allFinite();
            const bool inside = finite && dom.contains(detail::unpack(y5).u);
            if (!finite || !inside) {
                h = 0.5 * h_try;
                if (std::abs(h) < h_min) {
                    out.exit = SampledCurve::Exit::left_domain;
                    return out;
                }
                continue;
            }
            double err_norm = 0.0;
            for (int i = 0; i < 4; ++i)
                err_norm = std::max(err_norm, std::abs(err[i]) / (1.0 + std::abs(y[i])));
            const double allowed = tol * std::abs(h_try);
            if (err_norm <= allowed) {
                t = hits_goal ? t_goal : t + h_try;
                y = y5;
                k1 = k7;  // FSAL
                const double grow = err_norm > 0.0
                                        ? std::min(5.0, std::max(0.2, 0.9 * std::pow(allowed / err_norm, 0.2)))
                                        : 5.0;
                h = h_try * grow;
            } else {
                h = h_try * std::max(0.2, 0.9 * std::pow(allowed / err_norm, 0.2));
            }
        }
        record(t_goal);
    }
    if (dir < 0.0) std::reverse(out.nodes.begin(), out.nodes.end());
    return out;
}

inline SampledCurve integrate_geodesic(const SurfacePatch& p, const GeodesicState& s0,
                                       double t_end, double tol = 1e-10, int n_nodes = 0) {
    if (t_end == 0.0) throw std::invalid_argument("integrate_geodesic: t_end must be non-zero");
    if (n_nodes <= 0) {
        n_nodes = int(std::ceil(std::abs(t_end) / 0.005));
        n_nodes = std::clamp(n_nodes, 32, 4000) + 1;
    }
    std::vector<double> times(n_nodes);
    for (int i = 0; i < n_nodes; ++i) times[i] = t_end * double(i) / (n_nodes - 1);
    return integrate_geodesic_at(p, s0, times, tol);
}

// Induced-metric speed at a node (first integral of the geodesic flow).
inline double metric_speed(const SurfacePatch& p, const CurveNode& n) {
    const FundamentalForms f = fundamental_forms(p, n.u);
    return std::sqrt(std::max(0.0, f.metric_dot(n.v, n.v)));
}

namespace detail {

inline double lagrange_interp(const std::vector<double>& ts, const std::vector<double>& ys,
                              double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double w = 1.0;
        for (std::size_t j = 0; j < ts.size(); ++j)
            if (j != i) w *= (t - ts[j]) / (ts[i] - ts[j]);
        acc += w * ys[i];
    }
    return acc;
}

// Parameter values of 5 consecutive-in-t samples around index c, with
// periodic coordinates unwrapped so stencils see a continuous path.
inline std::array<Vec2, 5> unwrapped_window(const SampledCurve& curve, const Domain& dom,
                                            std::size_t c) {
    std::array<Vec2, 5> w;
    for (int k = -2; k <= 2; ++k) {
        const ParamPoint& u = curve.nodes[c + k].u;
        w[k + 2] = Vec2(u.u1, u.u2);
    }
    auto unwrap = [](std::array<Vec2, 5>& a, int comp, double period) {
        for (int i = 1; i < 5; ++i) {
            double d = a[i][comp] - a[i - 1][comp];
            d -= period * std::round(d / period);
            a[i][comp] = a[i - 1][comp] + d;
        }
    };
    if (dom.periodic_u1) unwrap(w, 0, dom.span_u1());
    if (dom.periodic_u2) unwrap(w, 1, dom.span_u2());
    return w;
}

}  // namespace detail

// Geodesic curvature of a sampled surface curve at time t: the induced-metric
// norm of the covariant acceleration component orthogonal to the velocity,
// divided by the squared speed. Zero exactly on reparametrized geodesics,
// and invariant under smooth non-singular reparametrization.
inline double geodesic_curvature(const SurfacePatch& p, const SampledCurve& curve, double t) {
    if (!curve.has_param) throw std::invalid_argument("geodesic_curvature: curve has no parameters");
    const auto& nodes = curve.nodes;
    if (nodes.size() < 5) throw std::invalid_argument("geodesic_curvature: need at least 5 nodes");

    std::size_t c = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double d = std::abs(nodes[i].t - t);
        if (d < best) {
            best = d;
            c = i;
        }
    }
    if (c < 2 || c + 2 >= nodes.size())
        throw std::invalid_argument("geodesic_curvature: t not bracketed by 5 nodes");

    const Domain dom = p.domain();
    const double dt = nodes[c + 1].t - nodes[c].t;
    bool uniform = std::abs(nodes[c].t - t) <= 1e-9 * std::max(1.0, std::abs(t));
    for (int k = -2; k < 2 && uniform; ++k)
        uniform = std::abs((nodes[c + k + 1].t - nodes[c + k].t) - dt) <= 1e-9 * std::abs(dt);

    std::array<Vec2, 5> w;
    double h = dt;
    ParamPoint center;
    if (uniform) {
        w = detail::unwrapped_window(curve, dom, c);
        center = nodes[c].u;
    } else {
        // Resample through the 6 nearest nodes onto a uniform local grid.
        const std::size_t lo = std::min(std::max<std::size_t>(c, 3) - 3, nodes.size() - 6);
        std::vector<double> ts(6);
        std::vector<Vec2> uw(6);
        for (int i = 0; i < 6; ++i) {
            ts[i] = nodes[lo + i].t;
            uw[i] = Vec2(nodes[lo + i].u.u1, nodes[lo + i].u.u2);
        }
        auto unwrap = [&uw](int comp, double period) {
            for (std::size_t i = 1; i < uw.size(); ++i) {
                double d = uw[i][comp] - uw[i - 1][comp];
                d -= period * std::round(d / period);
                uw[i][comp] = uw[i - 1][comp] + d;
            }
        };
        if (dom.periodic_u1) unwrap(0, dom.span_u1());
        if (dom.periodic_u2) unwrap(1, dom.span_u2());
        std::vector<double> us1(6), us2(6);
        for (int i = 0; i < 6; ++i) {
            us1[i] = uw[i].x();
            us2[i] = uw[i].y();
        }
        h = (ts.back() - ts.front()) / 5.0;
        for (int k = -2; k <= 2; ++k) {
            const double tk = t + k * h;
            w[k + 2] = Vec2(detail::lagrange_interp(ts, us1, tk), detail::lagrange_interp(ts, us2, tk));
        }
        center = dom.wrap(ParamPoint(w[2].x(), w[2].y()));
    }

    Vec2 du, ddu;
    for (int comp = 0; comp < 2; ++comp) {
        std::array<double, 5> f;
        for (int i = 0; i < 5; ++i) f[i] = w[i][comp];
        du[comp] = stencil5_d1(f, h);
        ddu[comp] = stencil5_d2(f, h);
    }

    const FundamentalForms g = fundamental_forms(p, center);
    const double speed2 = g.metric_dot(du, du);
    if (speed2 <= 0.0) throw std::invalid_argument("geodesic_curvature: zero speed at t");

    const Christoffel ch = christoffel(p, center);
    Vec2 acc = ddu;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) acc[k] += ch.gamma[k][i][j] * du[i] * du[j];

    const Vec2 perp = acc - (g.metric_dot(acc, du) / speed2) * du;
    return std::sqrt(std::max(0.0, g.metric_dot(perp, perp))) / speed2;
}

}  // namespace geodlab
