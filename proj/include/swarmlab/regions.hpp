#pragma once

// Velocity-indexed sensitivity regions K(v) and their computable geometry:
// membership, signed distance to the boundary, the closed surrogate family
// Theta(v) with its speed-band segment, admissible-slope classification, and
// samplers for boundary-driven estimators.
//
// Three built-in families (d = 2,3):
//   Ball       : K(v) = B(0,r), independent of v.
//   SpeedBall  : K(v) = B(0, rt(|v|)) with rt a clipped-linear Lipschitz map.
//   VisionCone : K(v) = { |x| <= r, angle(x,v) <= theta(|v|) }, where theta
//                equals pi for speeds <= 1 (full ball) and decays smoothly to
//                theta_star for large speeds.

#include <cmath>
#include <optional>
#include <utility>

#include "swarmlab/errors.hpp"
#include "swarmlab/rng.hpp"
#include "swarmlab/vec.hpp"

namespace swarmlab {

inline constexpr double kPi = 3.14159265358979323846;

// Admissible indicator values at a phase-space point: {0}, {1}, or [0,1].
enum class SlopeSet { Zero, One, Full };

// Smooth angle profile: theta(z) = pi for z <= 1, then
// theta(z) = theta_star + (pi - theta_star) * exp(-k (z-1)^2) for z > 1.
// All derivatives of the Gaussian factor vanish at z = 1, so the profile is
// C-infinity, non-increasing, and tends to theta_star.
struct AngleProfile {
    double theta_star = kPi / 3.0;
    double shape_k = 1.0;

    double theta(double z) const {
        if (z <= 1.0) return kPi;
        const double u = z - 1.0;
        return theta_star + (kPi - theta_star) * std::exp(-shape_k * u * u);
    }

    // sup |theta'| = (pi - theta_star) * sqrt(2k) * e^{-1/2}, attained at
    // z = 1 + 1/sqrt(2k).
    double lipschitz() const {
        return (kPi - theta_star) * std::sqrt(2.0 * shape_k) * std::exp(-0.5);
    }

    void validate() const {
        if (!(theta_star > 0.0) || !(theta_star < kPi))
            throw config_error("AngleProfile: theta_star must lie in (0, pi)");
        if (!(shape_k > 0.0))
            throw config_error("AngleProfile: shape parameter k must be positive");
    }
};

enum class RegionKind { Ball, SpeedBall, VisionCone };

namespace detail {

// Distance from the meridian point (s,q), q >= 0, to the circular-sector
// boundary {rho = r, phi <= th} (arc) and {phi = th, rho <= r} (lateral face).
inline double sector_boundary_distance(double s, double q, double r, double th) {
    const double rho = std::sqrt(s * s + q * q);
    const double phi = std::atan2(q, s); // in [0, pi]
    const double es = r * std::cos(th), eq = r * std::sin(th);
    // Arc part.
    double d_arc;
    if (phi <= th) {
        d_arc = std::abs(rho - r);
    } else {
        const double dx = s - es, dy = q - eq;
        d_arc = std::sqrt(dx * dx + dy * dy);
    }
    // Lateral face: segment from the apex (0,0) to (es,eq).
    const double t = clamp((s * es + q * eq) / (r * r), 0.0, 1.0);
    const double lx = s - t * es, ly = q - t * eq;
    const double d_face = std::sqrt(lx * lx + ly * ly);
    return d_arc < d_face ? d_arc : d_face;
}

template <std::size_t D>
inline void orthonormal_frame(const Vec<D>& u, Vec<D>& w1, Vec<D>& w2);

template <>
inline void orthonormal_frame<2>(const Vec<2>& u, Vec<2>& w1, Vec<2>& w2) {
    w1 = {-u[1], u[0]};
    w2 = {0.0, 0.0};
}

template <>
inline void orthonormal_frame<3>(const Vec<3>& u, Vec<3>& w1, Vec<3>& w2) {
    // Pick the axis least aligned with u, then Gram-Schmidt.
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(u[i]) < std::abs(u[k])) k = i;
    Vec<3> e{0.0, 0.0, 0.0};
    e[k] = 1.0;
    w1 = e - dot(e, u) * u;
    w1 = normalized(w1);
    w2 = {u[1] * w1[2] - u[2] * w1[1], u[2] * w1[0] - u[0] * w1[2],
          u[0] * w1[1] - u[1] * w1[0]};
}

} // namespace detail

template <std::size_t D>
struct RegionFamily {
    static_assert(D == 2 || D == 3, "regions are defined for d = 2,3 only");

    RegionKind kind = RegionKind::Ball;
    double radius = 1.0; // Ball / VisionCone radius

    // SpeedBall radius map: rt(z) = clamp(base + slope*z, min_radius, max_radius).
    double sb_base = 1.0;
    double sb_slope = 0.0;
    double sb_min_radius = 1.0;
    double sb_max_radius = 1.0;

    AngleProfile profile;

    static RegionFamily ball(double r) {
        RegionFamily f;
        f.kind = RegionKind::Ball;
        f.radius = r;
        f.validate();
        return f;
    }

    static RegionFamily speed_ball(double base, double slope, double min_radius,
                                   double max_radius) {
        RegionFamily f;
        f.kind = RegionKind::SpeedBall;
        f.sb_base = base;
        f.sb_slope = slope;
        f.sb_min_radius = min_radius;
        f.sb_max_radius = max_radius;
        f.validate();
        return f;
    }

    static RegionFamily vision_cone(double r, AngleProfile p = {}) {
        RegionFamily f;
        f.kind = RegionKind::VisionCone;
        f.radius = r;
        f.profile = p;
        f.validate();
        return f;
    }

    void validate() const {
        switch (kind) {
        case RegionKind::Ball:
        case RegionKind::VisionCone:
            if (!(radius > 0.0)) throw config_error("region: radius must be positive");
            if (kind == RegionKind::VisionCone) profile.validate();
            break;
        case RegionKind::SpeedBall:
            if (!(sb_min_radius > 0.0) || !(sb_min_radius <= sb_max_radius))
                throw config_error("region: speed_ball needs 0 < min_radius <= max_radius");
            if (!(speed_radius(0.0) > 0.0))
                throw config_error("region: speed_ball radius must stay positive");
            break;
        }
    }

    double speed_radius(double z) const {
        return clamp(sb_base + sb_slope * z, sb_min_radius, sb_max_radius);
    }

    // Radius R_K of a ball containing K(v) for every v (global compactness
    // witness).
    double global_radius() const {
        switch (kind) {
        case RegionKind::Ball: return radius;
        case RegionKind::SpeedBall: return sb_max_radius;
        case RegionKind::VisionCone: return radius;
        }
        return radius;
    }

    // The constant C with K(v) delta K(w) inside Theta(v)^{C|v-w|,+}
    // (0 for a fixed ball, the radius-map Lipschitz constant for the speed
    // ball, 2*(2 v Lip_theta)*r for the cone).
    double velocity_lipschitz() const {
        switch (kind) {
        case RegionKind::Ball: return 0.0;
        case RegionKind::SpeedBall: return std::abs(sb_slope);
        case RegionKind::VisionCone:
            return 2.0 * std::max(2.0, profile.lipschitz()) * radius;
        }
        return 0.0;
    }

    // Upper bound on sup_{|w|<=eta} of how far points of K(v) delta K(v-w)
    // can sit from Theta(v). Used by exact fast paths of the mollified
    // indicator; sharper than velocity_lipschitz()*eta where possible.
    double symmdiff_margin(double vnorm, double eta) const {
        switch (kind) {
        case RegionKind::Ball:
            return 0.0;
        case RegionKind::SpeedBall: {
            const double zlo = std::max(vnorm - eta, 0.0);
            const double zhi = vnorm + eta;
            const double r0 = speed_radius(vnorm);
            return std::max(std::abs(speed_radius(zlo) - r0),
                            std::abs(speed_radius(zhi) - r0));
        }
        case RegionKind::VisionCone:
            if (vnorm + eta <= 1.0) return 0.0; // full ball for every |v-w|
            return std::min(2.0 * radius, velocity_lipschitz() * eta);
        }
        return 0.0;
    }

    bool contains(const Vec<D>& v, const Vec<D>& x) const {
        const double xn2 = norm2(x);
        switch (kind) {
        case RegionKind::Ball:
            return xn2 <= radius * radius;
        case RegionKind::SpeedBall: {
            const double r = speed_radius(norm(v));
            return xn2 <= r * r;
        }
        case RegionKind::VisionCone: {
            if (xn2 > radius * radius) return false;
            const double z = norm(v);
            if (z <= 1.0) return true; // theta = pi: full ball
            const double xn = std::sqrt(xn2);
            if (xn == 0.0) return true; // apex
            const double c = clamp(dot(x, v) / (xn * z), -1.0, 1.0);
            return std::acos(c) <= profile.theta(z);
        }
        }
        return false;
    }

    // Negative inside, positive outside; |value| is the Euclidean distance
    // from x to the topological boundary of K(v).
    double signed_distance(const Vec<D>& v, const Vec<D>& x) const {
        switch (kind) {
        case RegionKind::Ball:
            return norm(x) - radius;
        case RegionKind::SpeedBall:
            return norm(x) - speed_radius(norm(v));
        case RegionKind::VisionCone: {
            const double z = norm(v);
            if (z <= 1.0) return norm(x) - radius;
            const double th = profile.theta(z);
            // Meridian coordinates about the axis u = v/|v|.
            const double s = dot(x, v) / z;
            const double q2 = norm2(x) - s * s;
            const double q = q2 > 0.0 ? std::sqrt(q2) : 0.0;
            const double d = detail::sector_boundary_distance(s, q, radius, th);
            const double rho = std::sqrt(s * s + q * q);
            const bool inside =
                rho <= radius && std::atan2(q, s) <= th;
            return inside ? -d : d;
        }
        }
        return 0.0;
    }

    // Endpoints of the segment R(v) = [a(v), b(v)] that joins Theta(v) for
    // cone speeds strictly between 1/2 and 1; a(v) = -r v/|v|,
    // b(v) = 2r(|v|-1) v/|v|. Closed-set convention at the band ends: no
    // segment at |v| = 1/2 or |v| = 1.
    std::optional<std::pair<Vec<D>, Vec<D>>> theta_segment(const Vec<D>& v) const {
        if (kind != RegionKind::VisionCone) return std::nullopt;
        const double z = norm(v);
        if (!(z > 0.5 && z < 1.0)) return std::nullopt;
        const Vec<D> u = (1.0 / z) * v;
        return std::make_pair(-radius * u, (2.0 * radius * (z - 1.0)) * u);
    }

    // Distance from x to the surrogate family Theta(v).
    double theta_distance(const Vec<D>& v, const Vec<D>& x) const {
        double d = std::abs(signed_distance(v, x));
        if (auto seg = theta_segment(v)) {
            const Vec<D> ab = seg->second - seg->first;
            const double len2 = norm2(ab);
            double t = len2 > 0.0 ? clamp(dot(x - seg->first, ab) / len2, 0.0, 1.0) : 0.0;
            const double ds = dist(x, seg->first + t * ab);
            d = std::min(d, ds);
        }
        return d;
    }

    bool eps_boundary_contains(const Vec<D>& v, const Vec<D>& x, double eps) const {
        if (!(eps > 0.0)) throw config_error("eps_boundary_contains: eps must be positive");
        return std::abs(signed_distance(v, x)) <= eps;
    }

    bool theta_enlarged_contains(const Vec<D>& v, const Vec<D>& x, double eps) const {
        if (eps < 0.0) throw config_error("theta_enlarged_contains: eps must be >= 0");
        return theta_distance(v, x) <= eps;
    }

    bool theta_contains(const Vec<D>& v, const Vec<D>& x) const {
        return theta_enlarged_contains(v, x, 0.0);
    }

    // Admissible-slope classification with boundary tolerance tol_b. Theta(v)
    // stands in for the generalized boundary, which it contains, so Full may
    // trigger slightly inside the region (on the speed-band segment); that
    // only widens the admissible set.
    SlopeSet slope_set(const Vec<D>& v, const Vec<D>& x, double tol_b) const {
        if (!(tol_b > 0.0)) throw config_error("slope_set: tol_b must be positive");
        const double sd = signed_distance(v, x);
        if (std::abs(sd) <= tol_b) return SlopeSet::Full;
        if (theta_distance(v, x) <= tol_b) return SlopeSet::Full;
        return sd < 0.0 ? SlopeSet::One : SlopeSet::Zero;
    }

    // Random point on the boundary dK(v).
    Vec<D> sample_boundary(const Vec<D>& v, Rng& rng) const {
        const double z = norm(v);
        double r = radius;
        if (kind == RegionKind::SpeedBall) r = speed_radius(z);
        const bool is_sphere =
            kind != RegionKind::VisionCone || z <= 1.0;
        if (is_sphere) return r * rng.template unit_vector<D>();
        return sample_cone_boundary(v, z, rng);
    }

    // Random point of Theta(v) = dK(v), joined with the speed-band segment
    // when present. The segment gets a fixed 25% share; uniformity across
    // components is not required by its uses (sup-type fits and coverage
    // checks).
    Vec<D> sample_theta(const Vec<D>& v, Rng& rng) const {
        if (auto seg = theta_segment(v)) {
            if (rng.uniform01() < 0.25) {
                const double t = rng.uniform01();
                return seg->first + t * (seg->second - seg->first);
            }
        }
        return sample_boundary(v, rng);
    }

private:
    Vec<D> sample_cone_boundary(const Vec<D>& v, double z, Rng& rng) const {
        const double th = profile.theta(z);
        const double r = radius;
        const Vec<D> u = (1.0 / z) * v;
        Vec<D> w1, w2;
        detail::orthonormal_frame<D>(u, w1, w2);
        if constexpr (D == 2) {
            const double arc_len = 2.0 * th * r;
            const double face_len = 2.0 * r;
            if (rng.uniform01() < arc_len / (arc_len + face_len)) {
                const double phi = rng.uniform(-th, th);
                return (r * std::cos(phi)) * u + (r * std::sin(phi)) * w1;
            }
            const double side = rng.uniform01() < 0.5 ? 1.0 : -1.0;
            const double rho = rng.uniform(0.0, r);
            return (rho * std::cos(th)) * u + (side * rho * std::sin(th)) * w1;
        } else {
            const double cap_area = 2.0 * kPi * r * r * (1.0 - std::cos(th));
            const double face_area = kPi * r * r * std::sin(th);
            const double psi = rng.uniform(0.0, 2.0 * kPi);
            const Vec<D> t = std::cos(psi) * w1 + std::sin(psi) * w2;
            if (rng.uniform01() < cap_area / (cap_area + face_area)) {
                const double ca = rng.uniform(std::cos(th), 1.0);
                const double sa = std::sqrt(std::max(0.0, 1.0 - ca * ca));
                return (r * ca) * u + (r * sa) * t;
            }
            const double rho = r * std::sqrt(rng.uniform01());
            return (rho * std::cos(th)) * u + (rho * std::sin(th)) * t;
        }
    }
};

} // namespace swarmlab
