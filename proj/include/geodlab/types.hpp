#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace geodlab {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;

// A point in the 2-D parameter domain of a surface patch.
struct ParamPoint {
    double u1 = 0.0;
    double u2 = 0.0;

    ParamPoint() = default;
    ParamPoint(double a, double b) : u1(a), u2(b) {}

    double operator[](int i) const { return i == 0 ? u1 : u2; }
    Vec2 vec() const { return Vec2(u1, u2); }
    bool finite() const { return std::isfinite(u1) && std::isfinite(u2); }
};

inline ParamPoint operator+(ParamPoint a, const Vec2& d) {
    return ParamPoint(a.u1 + d.x(), a.u2 + d.y());
}

// Rectangular parameter domain; a direction may be periodic with period
// (max - min), in which case coordinates wrap instead of bounding.
struct Domain {
    double u1_min = -1.0, u1_max = 1.0;
    double u2_min = -1.0, u2_max = 1.0;
    bool periodic_u1 = false;
    bool periodic_u2 = false;

    double span_u1() const { return u1_max - u1_min; }
    double span_u2() const { return u2_max - u2_min; }

    bool contains(const ParamPoint& u, double pad = 0.0) const {
        if (!u.finite()) return false;
        if (!periodic_u1 && (u.u1 < u1_min - pad || u.u1 > u1_max + pad)) return false;
        if (!periodic_u2 && (u.u2 < u2_min - pad || u.u2 > u2_max + pad)) return false;
        return true;
    }

    // Map periodic coordinates back into the fundamental interval.
    ParamPoint wrap(ParamPoint u) const {
        if (periodic_u1) {
            const double w = span_u1();
            u.u1 = u.u1 - w * std::floor((u.u1 - u1_min) / w);
        }
        if (periodic_u2) {
            const double w = span_u2();
            u.u2 = u.u2 - w * std::floor((u.u2 - u2_min) / w);
        }
        return u;
    }

    ParamPoint clamp(ParamPoint u) const {
        u = wrap(u);
        if (!periodic_u1) u.u1 = std::min(std::max(u.u1, u1_min), u1_max);
        if (!periodic_u2) u.u2 = std::min(std::max(u.u2, u2_min), u2_max);
        return u;
    }
};

// Deterministic RNG used by experiments; hand-rolled uniform so output
// bytes do not depend on the standard library's distribution choices.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        // xorshift64*
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1Dull;
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

}  // namespace geodlab
