#pragma once

#include <memory>
#include <stdexcept>

#include "surface_patch.hpp"
#include "types.hpp"

namespace geodlab {

// Curvature of the constant-distance surface in a principal direction:
// a / (1 + r a).
inline double offset_curvature_law(double a, double r) {
    if (a < 0.0 || r < 0.0)
        throw std::invalid_argument("offset_curvature_law: a and r must be non-negative");
    return a / (1.0 + r * a);
}

// Constant-distance surface S_r(u) = S(u) + r n(u), sharing the base
// parametrization (matched normals). First and second partials are obtained
// by analytic differentiation of n = (e1 x e2)/|e1 x e2|, which needs base
// partials through order 3.
class OffsetPatch final : public SurfacePatch {
public:
    OffsetPatch(SurfacePatchPtr base, double r) : base_(std::move(base)), r_(r) {
        if (!base_) throw std::invalid_argument("OffsetPatch: null base");
        if (r < 0.0) throw std::invalid_argument("OffsetPatch: offset distance must be non-negative");
    }

    Domain domain() const override { return base_->domain(); }
    bool has_d3() const override { return false; }
    std::vector<Domain> newton_subdomains() const override { return base_->newton_subdomains(); }

    const SurfacePatch& base() const { return *base_; }
    double offset_distance() const { return r_; }

protected:
    Vec3 partial(int i, int j, const ParamPoint& u) const override {
        if (i == 0 && j == 0) return base_->eval(u) + r_ * base_->unit_normal(u);

        const Vec3 e1 = base_->d1(u, 0), e2 = base_->d1(u, 1);
        const Vec3 W = e1.cross(e2);
        const double s = 1.0 / W.norm();

        auto dW = [&](int a) -> Vec3 {
            return base_->d2(u, 0, a).cross(e2) + e1.cross(base_->d2(u, 1, a));
        };

        if (i + j == 1) {
            const int a = (i == 1) ? 0 : 1;
            const Vec3 Wa = dW(a);
            const double sa = -W.dot(Wa) * s * s * s;
            return base_->d1(u, a) + r_ * (Wa * s + W * sa);
        }

        // Second partial in directions (a, b) recovered from the counts.
        const int a = 0 + (i == 0);   // (2,0)->0, (1,1)->0, (0,2)->1
        const int b = (i == 2) ? 0 : 1;
        const Vec3 Wa = dW(a), Wb = dW(b);
        const Vec3 Wab = base_->d3(u, 0, a, b).cross(e2) + base_->d2(u, 0, a).cross(base_->d2(u, 1, b)) +
                         base_->d2(u, 0, b).cross(base_->d2(u, 1, a)) + e1.cross(base_->d3(u, 1, a, b));
        const double s3 = s * s * s;
        const double sa = -W.dot(Wa) * s3;
        const double sb = -W.dot(Wb) * s3;
        const double sab = -(Wb.dot(Wa) + W.dot(Wab)) * s3 - 3.0 * W.dot(Wa) * s * s * sb;
        const Vec3 nab = Wab * s + Wa * sb + Wb * sa + W * sab;
        return base_->d2(u, a, b) + r_ * nab;
    }

private:
    SurfacePatchPtr base_;
    double r_;
};

inline std::shared_ptr<const OffsetPatch> offset_surface(SurfacePatchPtr base, double r) {
    return std::make_shared<OffsetPatch>(std::move(base), r);
}

}  // namespace geodlab
