#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geodesic.hpp"
#include "scalar_field.hpp"
#include "surface_patch.hpp"

namespace geodlab {

struct LimitEstimate {
    std::vector<std::pair<double, double>> values;  // (scale, ratio), scales decreasing
    double extrapolated = 0.0;
    double fit_order = 0.0;  // observed convergence order; +inf when exact
    bool ok = false;         // false when the ratios are not converging monotonically
};

// Extrapolate ratio(scale) -> ratio(0) assuming a leading error term
// proportional to scale^assumed_order. The observed order is reported, not
// silently trusted.
inline LimitEstimate richardson_extrapolate(std::vector<std::pair<double, double>> values,
                                            double assumed_order = 2.0) {
    if (values.size() < 2) throw std::invalid_argument("richardson: need at least 2 scales");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i].first > 0.0) || values[i].first >= values[i - 1].first)
            throw std::invalid_argument("richardson: scales must be positive and decreasing");

    LimitEstimate est;
    est.values = values;
    const std::size_t n = values.size();
    std::vector<double> diffs(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) diffs[i] = values[i + 1].second - values[i].second;

    const double scale_ref = 1.0 + std::abs(values.back().second);
    bool exact = true;
    for (double d : diffs) exact = exact && std::abs(d) < 1e-14 * scale_ref;
    if (exact) {
        est.extrapolated = values.back().second;
        est.fit_order = std::numeric_limits<double>::infinity();
        est.ok = true;
        return est;
    }

    bool monotone = true;
    for (std::size_t i = 0; i + 1 < diffs.size(); ++i) {
        if (diffs[i] * diffs[i + 1] < 0.0) monotone = false;
        if (std::abs(diffs[i + 1]) > std::abs(diffs[i])) monotone = false;
    }
    est.ok = monotone;
    if (!monotone) {
        est.extrapolated = values.back().second;
        est.fit_order = 0.0;
        return est;
    }

    const double s_prev = values[n - 2].first, s_last = values[n - 1].first;
    const double ratio = std::pow(s_prev / s_last, assumed_order);
    est.extrapolated = values.back().second + diffs.back() / (ratio - 1.0);

    if (n >= 3 && std::abs(diffs.back()) > 0.0) {
        double acc = 0.0;
        int cnt = 0;
        for (std::size_t i = 0; i + 1 < diffs.size(); ++i) {
            if (std::abs(diffs[i + 1]) == 0.0) continue;
            acc += std::log(std::abs(diffs[i]) / std::abs(diffs[i + 1])) /
                   std::log(values[i].first / values[i + 1].first);
            ++cnt;
        }
        est.fit_order = cnt > 0 ? acc / cnt : std::numeric_limits<double>::infinity();
    } else {
        est.fit_order = assumed_order;
    }
    return est;
}

// Limit of the transverse geodesic deflection ratio: a geodesic of the graph
// patch crossing (0, x2) with velocity (1, 0) has, at the crossing,
// xddot2 / (xdot1^2 x2) -> -(a1 a2) as x2 -> 0. The ratio is read directly
// off the geodesic equations at t = 0 for each scale and extrapolated.
inline LimitEstimate deflection_ratio_limit(double a1, double a2, const ScalarFieldPtr& h,
                                            const std::vector<double>& x2_scales,
                                            Domain dom = GraphPatch::default_domain()) {
    const GraphPatch patch(a1, a2, h, dom);
    std::vector<std::pair<double, double>> values;
    values.reserve(x2_scales.size());
    for (double s : x2_scales) {
        if (s <= 0.0) throw std::invalid_argument("deflection_ratio_limit: scales must be positive");
        const GeodesicRhs rhs = geodesic_rhs(patch, GeodesicState{ParamPoint(0.0, s), Vec2(1.0, 0.0)});
        values.emplace_back(s, rhs.acceleration.y() / s);
    }
    return richardson_extrapolate(std::move(values), 2.0);
}

}  // namespace geodlab
