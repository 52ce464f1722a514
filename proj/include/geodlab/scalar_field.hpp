#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>

#include "types.hpp"

namespace geodlab {

// Scalar remainder term of a graph patch: h(u1, u2) with analytic mixed
// partials through total order 3. partial(i, j) is d^{i+j} h / du1^i du2^j.
// Valid fields vanish to second order at the origin.
class ScalarField {
public:
    virtual ~ScalarField() = default;
    virtual double partial(int i, int j, const ParamPoint& u) const = 0;
    double value(const ParamPoint& u) const { return partial(0, 0, u); }
};

using ScalarFieldPtr = std::shared_ptr<const ScalarField>;

class ZeroField final : public ScalarField {
public:
    double partial(int, int, const ParamPoint&) const override { return 0.0; }
};

// h = c * u1^2 * u2^2.
class QuarticCrossField final : public ScalarField {
public:
    explicit QuarticCrossField(double coeff) : c_(coeff) {}

    double partial(int i, int j, const ParamPoint& u) const override {
        return c_ * mono(i, u.u1) * mono(j, u.u2);
    }

private:
    static double mono(int k, double x) {
        switch (k) {
            case 0: return x * x;
            case 1: return 2.0 * x;
            case 2: return 2.0;
            default: return 0.0;
        }
    }
    double c_;
};

// Exact remainder of a sphere of radius 1/a written as a graph:
//   h = 1/a - sqrt(1/a^2 - u1^2 - u2^2) - (a/2)(u1^2 + u2^2).
// Defined for u1^2 + u2^2 < 1/a^2.
class SphereRemainderField final : public ScalarField {
public:
    explicit SphereRemainderField(double a) : a_(a) {
        if (a <= 0.0) throw std::invalid_argument("SphereRemainderField: a must be positive");
    }

    double partial(int i, int j, const ParamPoint& u) const override {
        const double q = 1.0 / (a_ * a_) - u.u1 * u.u1 - u.u2 * u.u2;
        if (q <= 0.0) throw std::domain_error("SphereRemainderField: point outside hemisphere");
        const double s = std::sqrt(q);
        const double x = u.u1, y = u.u2;
        const int total = i + j;
        if (total == 0) return 1.0 / a_ - s - 0.5 * a_ * (x * x + y * y);
        const double inv_s = 1.0 / s;
        const double inv_s3 = inv_s * inv_s * inv_s;
        const double inv_s5 = inv_s3 * inv_s * inv_s;
        if (total == 1) {
            const double xi = (i == 1) ? x : y;
            return xi * inv_s - a_ * xi;
        }
        if (total == 2) {
            // d_i d_j h = delta_ij (1/s - a) + x_i x_j / s^3
            if (i == 2) return (inv_s - a_) + x * x * inv_s3;
            if (j == 2) return (inv_s - a_) + y * y * inv_s3;
            return x * y * inv_s3;
        }
        if (total == 3) {
            // d_k d_i d_j h = (delta_ij x_k + delta_ik x_j + delta_jk x_i)/s^3
            //                 + 3 x_i x_j x_k / s^5
            if (i == 3) return 3.0 * x * inv_s3 + 3.0 * x * x * x * inv_s5;
            if (j == 3) return 3.0 * y * inv_s3 + 3.0 * y * y * y * inv_s5;
            if (i == 2) return y * inv_s3 + 3.0 * x * x * y * inv_s5;
            return x * inv_s3 + 3.0 * x * y * y * inv_s5;
        }
        throw std::invalid_argument("ScalarField: partials available through order 3 only");
    }

private:
    double a_;
};

inline ScalarFieldPtr zero_field() { return std::make_shared<ZeroField>(); }
inline ScalarFieldPtr quartic_cross_field(double c) { return std::make_shared<QuarticCrossField>(c); }
inline ScalarFieldPtr sphere_remainder_field(double a) { return std::make_shared<SphereRemainderField>(a); }

}  // namespace geodlab
