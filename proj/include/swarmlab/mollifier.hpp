#pragma once

// Mollified region indicator: the sharp indicator convolved against a smooth
// radial bump in position (width eps) and velocity (width eta),
//
//   I(v,x) = sum_{y,w nodes} W_y W_w 1_{K(v-w)}(x-y),
//
// evaluated by a tensor Gauss-Legendre rule over the bump supports. The bump
// weights are normalized by the same quadrature rule, so the node weights sum
// to one exactly and the result always lies in [0,1], reaching 1 (resp. 0)
// identically away from the boundary band.

#include <cmath>
#include <vector>

#include "swarmlab/errors.hpp"
#include "swarmlab/quadrature.hpp"
#include "swarmlab/regions.hpp"

namespace swarmlab {

struct MollifierParams {
    double eps = 0.05;  // spatial width
    double eta = 0.05;  // velocity width
    int quad_nodes = 8; // quadrature order per axis

    void validate() const {
        if (!(eps > 0.0) || !(eta > 0.0))
            throw config_error("mollifier: eps and eta must be positive");
        if (quad_nodes < 1) throw config_error("mollifier: quad_nodes must be >= 1");
    }
};

namespace detail {

inline double bump_unnormalized(double u2) {
    return u2 < 1.0 ? std::exp(-1.0 / (1.0 - u2)) : 0.0;
}

template <std::size_t D>
struct BumpStencil {
    std::vector<Vec<D>> offsets; // scaled node positions, |offset| < width
    std::vector<double> weights; // normalized: sum == 1 exactly in exact math

    BumpStencil(double width, int n) {
        const QuadratureRule& rule = gauss_legendre(n);
        std::vector<Vec<D>> pts;
        std::vector<double> raw;
        double total = 0.0;
        const int count = D == 2 ? n * n : n * n * n;
        for (int idx = 0; idx < count; ++idx) {
            Vec<D> u;
            double w = 1.0;
            int rem = idx;
            for (std::size_t axis = 0; axis < D; ++axis) {
                const int k = rem % n;
                rem /= n;
                u[axis] = rule.nodes[k];
                w *= rule.weights[k];
            }
            const double b = bump_unnormalized(norm2(u));
            if (b <= 0.0) continue; // node outside the bump support
            pts.push_back(width * u);
            raw.push_back(w * b);
            total += w * b;
        }
        offsets = std::move(pts);
        weights.resize(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) weights[i] = raw[i] / total;
    }
};

} // namespace detail

// Reusable evaluator; building it precomputes the two stencils once.
// for_velocity(v) additionally precomputes the shifted-region parameters of
// every velocity node, which the pair loops of the force evaluation reuse
// across all displacements of one particle.
template <std::size_t D>
class MollifiedIndicator {
public:
    MollifiedIndicator(const RegionFamily<D>& region, const MollifierParams& params)
        : region_(region), params_(params),
          space_(params.eps, params.quad_nodes),
          vel_(params.eta, params.quad_nodes) {
        params.validate();
    }

    class ForVelocity {
    public:
        ForVelocity(const MollifiedIndicator& parent, const Vec<D>& v)
            : p_(parent), v_(v),
              margin_(parent.region_.symmdiff_margin(norm(v), parent.params_.eta)) {
            nodes_.reserve(parent.vel_.offsets.size());
            const RegionFamily<D>& reg = parent.region_;
            for (std::size_t a = 0; a < parent.vel_.offsets.size(); ++a) {
                VelNode n;
                n.weight = parent.vel_.weights[a];
                n.axis = v - parent.vel_.offsets[a];
                const double z = norm(n.axis);
                switch (reg.kind) {
                case RegionKind::Ball:
                    n.r2 = reg.radius * reg.radius;
                    break;
                case RegionKind::SpeedBall: {
                    const double r = reg.speed_radius(z);
                    n.r2 = r * r;
                    break;
                }
                case RegionKind::VisionCone:
                    n.r2 = reg.radius * reg.radius;
                    if (z > 1.0) {
                        n.angular = true;
                        // acos(p.axis / (|p| z)) <= theta  <=>
                        // p.axis >= |p| * z cos(theta).
                        n.z_cos_theta = z * std::cos(reg.profile.theta(z));
                    }
                    break;
                }
                nodes_.push_back(n);
            }
        }

        double operator()(const Vec<D>& x) const {
            // Exact fast paths: if every shifted point lands inside (resp.
            // outside) K(v-w) for all |w| < eta, the quadrature sums to 1
            // (0). A point x-y changes membership relative to K(v) only
            // within symmdiff_margin of Theta(v).
            const double sd = p_.region_.signed_distance(v_, x);
            if (std::abs(sd) > p_.params_.eps) {
                const double td = p_.region_.theta_distance(v_, x);
                if (td - p_.params_.eps > margin_) return sd < 0.0 ? 1.0 : 0.0;
            }
            double acc = 0.0;
            for (std::size_t b = 0; b < p_.space_.offsets.size(); ++b) {
                const Vec<D> p = x - p_.space_.offsets[b];
                const double pn2 = norm2(p);
                const double pn = std::sqrt(pn2);
                double inner = 0.0;
                for (const VelNode& n : nodes_) {
                    if (pn2 <= n.r2 &&
                        (!n.angular || dot(p, n.axis) >= pn * n.z_cos_theta))
                        inner += n.weight;
                }
                acc += p_.space_.weights[b] * inner;
            }
            return clamp(acc, 0.0, 1.0);
        }

    private:
        struct VelNode {
            double weight = 0.0;
            Vec<D> axis{};
            double r2 = 0.0;
            double z_cos_theta = 0.0;
            bool angular = false;
        };

        const MollifiedIndicator& p_;
        Vec<D> v_;
        double margin_;
        std::vector<VelNode> nodes_;
    };

    ForVelocity for_velocity(const Vec<D>& v) const { return ForVelocity(*this, v); }

    double operator()(const Vec<D>& v, const Vec<D>& x) const {
        return ForVelocity(*this, v)(x);
    }

    const MollifierParams& params() const { return params_; }

private:
    friend class ForVelocity;

    const RegionFamily<D>& region_;
    MollifierParams params_;
    detail::BumpStencil<D> space_;
    detail::BumpStencil<D> vel_;
};

template <std::size_t D>
inline double mollified_indicator(const RegionFamily<D>& region, const Vec<D>& v,
                                  const Vec<D>& x, const MollifierParams& params) {
    return MollifiedIndicator<D>(region, params)(v, x);
}

} // namespace swarmlab
