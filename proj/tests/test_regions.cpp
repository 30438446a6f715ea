#include "doctest.h"

#include <cmath>
#include <vector>

#include "swarmlab/mc.hpp"
#include "swarmlab/regions.hpp"
#include "swarmlab/rng.hpp"

using namespace swarmlab;

namespace {

constexpr double kTolGeom = 1e-9;

// Profile that equals pi/2 at z=5 to double precision: theta_star = pi/2 and
// a Gaussian tail that is below one ulp there.
AngleProfile half_plane_profile() {
    AngleProfile p;
    p.theta_star = kPi / 2.0;
    p.shape_k = 5.0;
    return p;
}

// Deterministic dense sweep of the cone boundary (2D): arc plus both faces.
std::vector<Vec<2>> cone_boundary_sweep_2d(const RegionFamily<2>& cone, const Vec<2>& v,
                                           int n_arc, int n_face) {
    const double z = norm(v);
    const double th = cone.profile.theta(z);
    const double r = cone.radius;
    const Vec<2> u = normalized(v);
    const Vec<2> w{-u[1], u[0]};
    std::vector<Vec<2>> pts;
    for (int i = 0; i <= n_arc; ++i) {
        const double phi = -th + 2.0 * th * i / n_arc;
        pts.push_back((r * std::cos(phi)) * u + (r * std::sin(phi)) * w);
    }
    for (int i = 0; i <= n_face; ++i) {
        const double rho = r * i / n_face;
        pts.push_back((rho * std::cos(th)) * u + (rho * std::sin(th)) * w);
        pts.push_back((rho * std::cos(th)) * u - (rho * std::sin(th)) * w);
    }
    return pts;
}

std::vector<Vec<3>> cone_boundary_sweep_3d(const RegionFamily<3>& cone, const Vec<3>& v,
                                           int n) {
    const double z = norm(v);
    const double th = cone.profile.theta(z);
    const double r = cone.radius;
    const Vec<3> u = normalized(v);
    Vec<3> w1, w2;
    detail::orthonormal_frame<3>(u, w1, w2);
    std::vector<Vec<3>> pts;
    for (int i = 0; i <= n; ++i) {
        const double alpha = th * i / n;
        for (int j = 0; j < n; ++j) {
            const double psi = 2.0 * kPi * j / n;
            const Vec<3> t = std::cos(psi) * w1 + std::sin(psi) * w2;
            pts.push_back((r * std::cos(alpha)) * u + (r * std::sin(alpha)) * t);
        }
    }
    for (int i = 0; i <= n; ++i) {
        const double rho = r * i / n;
        for (int j = 0; j < n; ++j) {
            const double psi = 2.0 * kPi * j / n;
            const Vec<3> t = std::cos(psi) * w1 + std::sin(psi) * w2;
            pts.push_back((rho * std::cos(th)) * u + (rho * std::sin(th)) * t);
        }
    }
    return pts;
}

template <std::size_t D>
double min_dist_to(const std::vector<Vec<D>>& pts, const Vec<D>& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) best = std::min(best, dist(p, x));
    return best;
}

} // namespace

TEST_CASE("contains: ball, full-ball cone regime, narrow cone") {
    auto ball = RegionFamily<2>::ball(1.0);
    CHECK(ball.contains({3.0, 0.0}, {0.5, 0.0}));
    CHECK(ball.contains({0.0, 0.0}, {1.0, 0.0})); // closed-set convention
    CHECK_FALSE(ball.contains({0.0, 0.0}, {1.0 + 1e-12, 0.0}));

    auto cone = RegionFamily<2>::vision_cone(1.0, {kPi / 3.0, 1.0});
    // |v| = 0.5: theta = pi, the region is the full ball.
    CHECK(cone.contains({0.5, 0.0}, {-0.9, 0.0}));
    // Large speed: theta(100) ~ pi/3; the angle between x and v is pi/2.
    CHECK_FALSE(cone.contains({100.0, 0.0}, {0.0, 0.9}));
    // Apex and zero velocity are always admissible.
    CHECK(cone.contains({100.0, 0.0}, {0.0, 0.0}));
    CHECK(cone.contains({0.0, 0.0}, {-0.9, 0.0}));
}

TEST_CASE("signed_distance: radial cases and the half-disk flat face") {
    auto ball = RegionFamily<2>::ball(1.0);
    CHECK(ball.signed_distance({1.0, 2.0}, {0.25, 0.0}) == doctest::Approx(-0.75));
    CHECK(ball.signed_distance({0.0, 0.0}, {2.0, 0.0}) == doctest::Approx(1.0));

    auto half = RegionFamily<2>::vision_cone(1.0, half_plane_profile());
    CHECK(half.profile.theta(5.0) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    // Point on the flat face of the half-disk.
    CHECK(std::abs(half.signed_distance({5.0, 0.0}, {0.0, 0.5})) <= kTolGeom);
    // Interior of the half-disk: closest boundary is the flat face.
    CHECK(half.signed_distance({5.0, 0.0}, {0.3, 0.2}) == doctest::Approx(-0.3));
    // Behind the flat face.
    CHECK(half.signed_distance({5.0, 0.0}, {-0.4, 0.3}) == doctest::Approx(0.4));
}

TEST_CASE("signed_distance validated against dense boundary sweeps") {
    auto cone2 = RegionFamily<2>::vision_cone(1.0, {kPi / 3.0, 1.0});
    const Vec<2> v2{1.7, -0.6};
    auto sweep2 = cone_boundary_sweep_2d(cone2, v2, 6000, 3000);
    // Sweep points must be boundary points of the analytic distance.
    Rng rng(42);
    for (int k = 0; k < 200; ++k) {
        const auto& p = sweep2[static_cast<std::size_t>(rng.uniform01() * sweep2.size())];
        CHECK(std::abs(cone2.signed_distance(v2, p)) <= kTolGeom);
    }
    for (int k = 0; k < 400; ++k) {
        const Vec<2> x = rng.uniform_in_cube<2>(1.6);
        const double sd = cone2.signed_distance(v2, x);
        const double ds = min_dist_to(sweep2, x);
        CHECK(std::abs(sd) <= ds + kTolGeom);
        CHECK(ds - std::abs(sd) <= 5e-3);
        CHECK(cone2.contains(v2, x) == (sd <= 0.0));
    }

    auto cone3 = RegionFamily<3>::vision_cone(1.0, {kPi / 3.0, 1.0});
    const Vec<3> v3{0.9, 1.1, -0.5};
    auto sweep3 = cone_boundary_sweep_3d(cone3, v3, 140);
    for (int k = 0; k < 300; ++k) {
        const Vec<3> x = rng.uniform_in_cube<3>(1.6);
        const double sd = cone3.signed_distance(v3, x);
        const double ds = min_dist_to(sweep3, x);
        CHECK(std::abs(sd) <= ds + kTolGeom);
        CHECK(ds - std::abs(sd) <= 0.06);
        CHECK(cone3.contains(v3, x) == (sd <= 0.0));
    }
}

TEST_CASE("eps-boundary membership") {
    auto ball = RegionFamily<2>::ball(1.0);
    CHECK(ball.eps_boundary_contains({0, 0}, {1.05, 0.0}, 0.1));
    CHECK_FALSE(ball.eps_boundary_contains({0, 0}, {0.5, 0.0}, 0.1));

    auto half = RegionFamily<2>::vision_cone(1.0, half_plane_profile());
    CHECK(half.eps_boundary_contains({5.0, 0.0}, {0.0, 0.5}, 0.01));
    CHECK_THROWS_AS(ball.eps_boundary_contains({0, 0}, {1.0, 0.0}, 0.0), config_error);
}

TEST_CASE("theta membership and the speed-band segment") {
    auto cone = RegionFamily<2>::vision_cone(1.0, {kPi / 3.0, 1.0});
    // |v| = 0.75: R(v) spans from (-1,0) to (-0.5,0); x = (-0.6,0) lies on it.
    CHECK(cone.theta_contains({0.75, 0.0}, {-0.6, 0.0}));
    CHECK_FALSE(cone.theta_contains({0.75, 0.0}, {-0.3, 0.0}));
    // No segment outside the open band (1/2, 1).
    CHECK_FALSE(cone.theta_contains({0.5, 0.0}, {-0.6, 0.0}));
    CHECK_FALSE(cone.theta_contains({1.0, 0.0}, {-0.6, 0.0}));

    auto ball = RegionFamily<2>::ball(1.0);
    CHECK(ball.theta_enlarged_contains({0.3, 0.4}, {1.0, 0.0}, 0.0));

    // Interior cone point with sd = -0.3 sits farther than 0.1 from Theta.
    const Vec<2> v{2.0, 0.0};
    const Vec<2> x{0.3, 0.0};
    CHECK(cone.signed_distance(v, x) == doctest::Approx(-0.3));
    CHECK_FALSE(cone.theta_enlarged_contains(v, x, 0.1));
}

TEST_CASE("slope classification") {
    auto ball = RegionFamily<2>::ball(1.0);
    CHECK(ball.slope_set({0, 0}, {0.2, 0.0}, 1e-6) == SlopeSet::One);
    CHECK(ball.slope_set({0, 0}, {5.0, 0.0}, 1e-6) == SlopeSet::Zero);
    CHECK(ball.slope_set({0, 0}, {1.0 + 1e-8, 0.0}, 1e-6) == SlopeSet::Full);

    // On the cone's speed-band segment the slope set widens to Full even
    // though the point is interior.
    auto cone = RegionFamily<2>::vision_cone(1.0, {kPi / 3.0, 1.0});
    CHECK(cone.slope_set({0.75, 0.0}, {-0.6, 0.0}, 1e-6) == SlopeSet::Full);
    CHECK(cone.slope_set({0.75, 0.0}, {0.6, 0.0}, 1e-6) == SlopeSet::One);
}

TEST_CASE("angle profile shape") {
    AngleProfile p{kPi / 3.0, 1.0};
    CHECK(p.theta(0.0) == kPi);
    CHECK(p.theta(1.0) == kPi);
    CHECK(p.theta(0.999999) == kPi);
    double prev = kPi;
    for (double z = 1.0; z <= 8.0; z += 0.01) {
        const double t = p.theta(z);
        CHECK(t <= prev + 1e-15);
        prev = t;
    }
    CHECK(p.theta(40.0) == doctest::Approx(kPi / 3.0).epsilon(1e-12));
    // Sampled Lipschitz bound.
    Rng rng(7);
    const double lip = p.lipschitz();
    for (int k = 0; k < 2000; ++k) {
        const double z1 = rng.uniform(0.0, 6.0);
        const double z2 = rng.uniform(0.0, 6.0);
        CHECK(std::abs(p.theta(z1) - p.theta(z2)) <= lip * std::abs(z1 - z2) + 1e-12);
    }
}

TEST_CASE("cone membership is monotone in theta_star") {
    auto narrow = RegionFamily<2>::vision_cone(1.0, {kPi / 4.0, 1.0});
    auto wide = RegionFamily<2>::vision_cone(1.0, {2.0, 1.0});
    Rng rng(11);
    int widened = 0;
    for (int k = 0; k < 20000; ++k) {
        const Vec<2> v = rng.uniform_in_cube<2>(3.0);
        const Vec<2> x = rng.uniform_in_cube<2>(1.2);
        if (narrow.contains(v, x)) CHECK(wide.contains(v, x));
        if (!narrow.contains(v, x) && wide.contains(v, x)) ++widened;
    }
    CHECK(widened > 0);
}

TEST_CASE("speed ball radius map and invariants") {
    auto sb = RegionFamily<2>::speed_ball(1.0, 1.0, 1.0, 2.0); // rt(z)=min(1+z,2)
    CHECK(sb.speed_radius(0.0) == 1.0);
    CHECK(sb.speed_radius(0.5) == 1.5);
    CHECK(sb.speed_radius(5.0) == 2.0);
    CHECK(sb.global_radius() == 2.0);
    CHECK(sb.velocity_lipschitz() == 1.0);
    Rng rng(3);
    for (int k = 0; k < 5000; ++k) {
        const Vec<2> v = rng.uniform_in_cube<2>(4.0);
        const Vec<2> x = rng.uniform_in_cube<2>(2.5);
        if (sb.contains(v, x)) CHECK(norm(x) <= sb.global_radius() + 1e-12);
    }
    CHECK_THROWS_AS(RegionFamily<2>::speed_ball(1.0, 1.0, 0.0, 2.0), config_error);
}

TEST_CASE("nesting of reductions and enlargements on sampled points") {
    auto cone = RegionFamily<2>::vision_cone(1.0, {kPi / 3.0, 1.0});
    Rng rng(19);
    for (int k = 0; k < 20000; ++k) {
        const Vec<2> v = rng.uniform_in_cube<2>(2.5);
        const Vec<2> x = rng.uniform_in_cube<2>(1.6);
        const double sd = cone.signed_distance(v, x);
        const bool in = cone.contains(v, x);
        // K^{eps,-} membership => contains => K^{eps,+} membership.
        const double eps = 0.1;
        const bool in_minus = in && std::abs(sd) > eps;
        const bool in_plus = sd <= eps;
        if (in_minus) CHECK(in);
        if (in) CHECK(in_plus);
        // delta < eps boundary nesting.
        if (std::abs(sd) <= 0.05) CHECK(std::abs(sd) <= 0.1);
    }
}

TEST_CASE("boundary and theta samplers land on their sets") {
    Rng rng(23);
    auto cone2 = RegionFamily<2>::vision_cone(1.0, {kPi / 3.0, 1.0});
    auto cone3 = RegionFamily<3>::vision_cone(1.0, {kPi / 3.0, 1.0});
    for (int k = 0; k < 3000; ++k) {
        const Vec<2> v = rng.uniform_in_cube<2>(2.0);
        const Vec<2> b = cone2.sample_boundary(v, rng);
        CHECK(std::abs(cone2.signed_distance(v, b)) <= 1e-9);
        // Boundary points always belong to Theta(v).
        CHECK(cone2.theta_distance(v, b) <= 1e-9);
        const Vec<2> t = cone2.sample_theta(v, rng);
        CHECK(cone2.theta_distance(v, t) <= 1e-9);
    }
    for (int k = 0; k < 1500; ++k) {
        const Vec<3> v = rng.uniform_in_cube<3>(2.0);
        const Vec<3> b = cone3.sample_boundary(v, rng);
        CHECK(std::abs(cone3.signed_distance(v, b)) <= 1e-9);
    }
}

TEST_CASE("lemma: dilated eps-boundaries nest (constructed samples)") {
    // Points of (d^eps K)^{delta,+} belong to d^{eps+delta} K.
    Rng rng(29);
    const double eps = 0.1, delta = 0.05;
    std::vector<RegionFamily<2>> regions = {
        RegionFamily<2>::ball(1.0),
        RegionFamily<2>::speed_ball(1.0, 1.0, 1.0, 2.0),
        RegionFamily<2>::vision_cone(1.0, {kPi / 3.0, 1.0}),
    };
    for (const auto& reg : regions) {
        int violations = 0;
        for (int k = 0; k < 20000; ++k) {
            const Vec<2> v = rng.uniform_in_cube<2>(2.0);
            const Vec<2> p = reg.sample_boundary(v, rng) +
                             rng.uniform(0.0, eps) * rng.unit_vector<2>();
            const Vec<2> x = p + rng.uniform(0.0, delta) * rng.unit_vector<2>();
            if (!(std::abs(reg.signed_distance(v, x)) <= eps + delta + 1e-12)) ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("lemma: indicator differences are dominated by 2eps boundaries") {
    Rng rng(31);
    auto cone = RegionFamily<2>::vision_cone(1.0, {kPi / 3.0, 1.0});
    int violations = 0;
    for (int k = 0; k < 20000; ++k) {
        const Vec<2> v = rng.uniform_in_cube<2>(2.0);
        const Vec<2> x1 = rng.uniform_in_cube<2>(1.3);
        const Vec<2> x2 = x1 + rng.uniform(0.0, 0.3) * rng.unit_vector<2>();
        const Vec<2> y1 = rng.uniform_in_cube<2>(1.3);
        const Vec<2> y2 = y1 + rng.uniform(0.0, 0.3) * rng.unit_vector<2>();
        const double e1 = dist(x1, x2), e2 = dist(y1, y2);
        const int lhs = std::abs(static_cast<int>(cone.contains(v, y1 - x1)) -
                                 static_cast<int>(cone.contains(v, y2 - x2)));
        const double sd = std::abs(cone.signed_distance(v, y1 - x1));
        const int rhs = static_cast<int>(sd <= 2.0 * e1) + static_cast<int>(sd <= 2.0 * e2);
        if (lhs > rhs) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("check_inclusion_sampled counts expected violations") {
    auto big = RegionFamily<2>::ball(1.0);
    auto small = RegionFamily<2>::ball(0.5);
    const Vec<2> v{0, 0};
    // A = B => zero violations.
    CHECK(check_inclusion_sampled<2>(
              [&](const Vec<2>& x) { return big.contains(v, x); },
              [&](const Vec<2>& x) { return big.contains(v, x); },
              [](Rng& r) { return r.uniform_in_cube<2>(2.0); }, 20000, 5) == 0);
    // B(0,1) vs B(0,0.5): expected count = n * area ratio within 3 sigma.
    const std::uint64_t n = 100000;
    const auto count = check_inclusion_sampled<2>(
        [&](const Vec<2>& x) { return big.contains(v, x); },
        [&](const Vec<2>& x) { return small.contains(v, x); },
        [](Rng& r) { return r.uniform_in_cube<2>(2.0); }, n, 6);
    const double p = (kPi * (1.0 - 0.25)) / 16.0;
    const double mean = static_cast<double>(n) * p;
    const double sigma = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
    CHECK(std::abs(static_cast<double>(count) - mean) <= 3.0 * sigma);
}
