#pragma once

// Interaction kernels and per-particle force evaluation for the three model
// classes, in sharp (slope-selected) and mollified modes. Pair sums run in
// ascending j order for bit-reproducibility; the optional uniform-grid
// neighbor list gathers a superset of the interacting pairs and yields
// bit-identical sums because skipped pairs contribute exact zeros.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "swarmlab/errors.hpp"
#include "swarmlab/mollifier.hpp"
#include "swarmlab/regions.hpp"
#include "swarmlab/rng.hpp"
#include "swarmlab/vec.hpp"

namespace swarmlab {

// ------------------------------------------------------------------
// Kernels. Every built-in reports analytic sup and Lipschitz bounds.
// ------------------------------------------------------------------

// Communication weight psi(x).
struct Kernel {
    enum class Kind { Constant, RationalDecay } kind = Kind::Constant;
    double value = 1.0; // Constant level
    double gamma = 1.0; // RationalDecay exponent: psi(x) = (1+|x|^2)^(-gamma)

    double operator()(double r2) const {
        switch (kind) {
        case Kind::Constant: return value;
        case Kind::RationalDecay: return std::pow(1.0 + r2, -gamma);
        }
        return 0.0;
    }

    double sup() const { return kind == Kind::Constant ? value : 1.0; }

    double lipschitz() const {
        if (kind == Kind::Constant) return 0.0;
        // max_r 2 gamma r (1+r^2)^(-gamma-1) at r^2 = 1/(2 gamma + 1).
        const double s = 1.0 / (2.0 * gamma + 1.0);
        return 2.0 * gamma * std::sqrt(s) * std::pow(1.0 + s, -gamma - 1.0);
    }

    void validate() const {
        if (kind == Kind::Constant && !(value >= 0.0))
            throw config_error("kernel: constant value must be >= 0");
        if (kind == Kind::RationalDecay && !(gamma > 0.0))
            throw config_error("kernel: rational decay exponent must be positive");
    }
};

// Velocity coupling h(v), with h(0) = 0.
struct VelocityCoupling {
    enum class Kind { Identity, ClippedLinear } kind = Kind::Identity;
    double vmax = 1.0; // ClippedLinear magnitude cap

    template <std::size_t D>
    Vec<D> operator()(const Vec<D>& v) const {
        switch (kind) {
        case Kind::Identity: return v;
        case Kind::ClippedLinear: {
            const double n = norm(v);
            if (n <= vmax || n == 0.0) return v;
            return (vmax / n) * v;
        }
        }
        return v;
    }

    double lipschitz() const { return 1.0; }

    // Supremum of |h| over a velocity-difference ball of radius r.
    double sup_on(double r) const {
        return kind == Kind::Identity ? r : std::min(r, vmax);
    }

    void validate() const {
        if (kind == Kind::ClippedLinear && !(vmax > 0.0))
            throw config_error("coupling: clipped_linear vmax must be positive");
    }
};

// Pair interaction gradient grad phi(x) for attractive-repulsive models:
// a smooth Gaussian well/barrier pair, W^{1,infty} by construction,
//   grad phi(x) = (A_a/l_a^2 e^{-|x|^2/(2 l_a^2)} - A_r/l_r^2 e^{-|x|^2/(2 l_r^2)}) x.
struct VectorKernel {
    double attract_amp = 1.0, attract_len = 1.0;
    double repulse_amp = 0.5, repulse_len = 0.5;

    template <std::size_t D>
    Vec<D> operator()(const Vec<D>& x) const {
        const double r2 = norm2(x);
        const double a = attract_amp / (attract_len * attract_len) *
                         std::exp(-0.5 * r2 / (attract_len * attract_len));
        const double r = repulse_amp / (repulse_len * repulse_len) *
                         std::exp(-0.5 * r2 / (repulse_len * repulse_len));
        return (a - r) * x;
    }

    double sup() const {
        // sup_s s e^{-s^2/(2 l^2)} / l^2 = e^{-1/2} / l, per term.
        const double e = std::exp(-0.5);
        return attract_amp * e / attract_len + repulse_amp * e / repulse_len;
    }

    double lipschitz() const {
        return attract_amp / (attract_len * attract_len) +
               repulse_amp / (repulse_len * repulse_len);
    }

    void validate() const {
        if (!(attract_len > 0.0) || !(repulse_len > 0.0))
            throw config_error("vector kernel: length scales must be positive");
        if (attract_amp < 0.0 || repulse_amp < 0.0)
            throw config_error("vector kernel: amplitudes must be >= 0");
    }
};

// Orientational field w(x) with |w| >= w0 > 0, W^{1,infty}. Built-ins:
// a constant direction and a unit-length swirl whose heading turns by a
// bounded tanh ramp along the first coordinate.
template <std::size_t D>
struct OrientationField {
    enum class Kind { Constant, TanhSwirl } kind = Kind::Constant;
    Vec<D> direction = [] { Vec<D> v{}; v[0] = 1.0; return v; }();
    double swirl_angle = 1.0; // heading amplitude (radians)
    double swirl_scale = 1.0; // ramp length scale

    Vec<D> operator()(const Vec<D>& x) const {
        switch (kind) {
        case Kind::Constant: return direction;
        case Kind::TanhSwirl: {
            const double a = swirl_angle * std::tanh(x[0] / swirl_scale);
            Vec<D> w{};
            w[0] = std::cos(a);
            w[1] = std::sin(a);
            return w;
        }
        }
        return direction;
    }

    double min_norm() const {
        return kind == Kind::Constant ? norm(direction) : 1.0;
    }

    void validate() const {
        if (kind == Kind::Constant && !(norm(direction) > 0.0))
            throw config_error("orientation field: constant direction must be nonzero");
        if (kind == Kind::TanhSwirl && !(swirl_scale > 0.0))
            throw config_error("orientation field: swirl scale must be positive");
    }
};

// ------------------------------------------------------------------
// Force model
// ------------------------------------------------------------------

enum class ForceKind { CuckerSmale, AttractiveRepulsive, FirstOrder };

template <std::size_t D>
struct ForceModel {
    ForceKind kind = ForceKind::CuckerSmale;
    RegionFamily<D> region = RegionFamily<D>::ball(1.0);
    Kernel psi;                  // CuckerSmale
    VelocityCoupling coupling;   // CuckerSmale
    VectorKernel grad_phi;       // AttractiveRepulsive / FirstOrder
    OrientationField<D> w_field; // FirstOrder

    void validate() const {
        region.validate();
        psi.validate();
        coupling.validate();
        grad_phi.validate();
        w_field.validate();
        if (kind == ForceKind::FirstOrder && !(w_field.min_norm() > 0.0))
            throw config_error("force: first-order model needs |w| >= w0 > 0");
    }
};

// Filippov solutions are non-unique where a pair sits on the generalized
// boundary; the selection rule fixes the indicator value used there.
struct SelectionRule {
    enum class Kind { Midpoint, Lower, Upper, SeededRandom } kind = Kind::Midpoint;
    std::uint64_t seed = 0;

    double operator()(std::size_t i, std::size_t j, std::uint64_t step) const {
        switch (kind) {
        case Kind::Midpoint: return 0.5;
        case Kind::Lower: return 0.0;
        case Kind::Upper: return 1.0;
        case Kind::SeededRandom: {
            std::uint64_t s = seed;
            s ^= 0x9e3779b97f4a7c15ULL + (static_cast<std::uint64_t>(i) << 32) +
                 static_cast<std::uint64_t>(j) + (step * 0x94d049bb133111ebULL);
            return static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
        }
        }
        return 0.5;
    }
};

// ------------------------------------------------------------------
// Uniform-grid neighbor list
// ------------------------------------------------------------------

// Cells of edge >= the interaction cutoff; gather() returns every particle in
// the 3^D block around a point, sorted ascending. Valid because K(v) lies in
// B(0, R_K) for all v, so pairs outside the gathered set contribute exactly
// zero to the force sums.
template <std::size_t D>
class NeighborGrid {
public:
    NeighborGrid(const std::vector<Vec<D>>& positions, double cell_size)
        : cell_(cell_size) {
        if (!(cell_size > 0.0)) throw config_error("neighbor grid: cell size must be positive");
        for (std::size_t k = 0; k < D; ++k) {
            lo_[k] = std::numeric_limits<double>::infinity();
            for (const auto& p : positions) lo_[k] = std::min(lo_[k], p[k]);
        }
        dims_.fill(1);
        for (std::size_t k = 0; k < D; ++k) {
            double hi = -std::numeric_limits<double>::infinity();
            for (const auto& p : positions) hi = std::max(hi, p[k]);
            dims_[k] = static_cast<std::size_t>((hi - lo_[k]) / cell_) + 1;
        }
        std::size_t total = 1;
        for (std::size_t k = 0; k < D; ++k) total *= dims_[k];
        cells_.assign(total, {});
        for (std::size_t i = 0; i < positions.size(); ++i)
            cells_[cell_index(positions[i])].push_back(i);
    }

    // Indices of all particles in the 3^D cell block around x, ascending.
    void gather(const Vec<D>& x, std::vector<std::size_t>& out) const {
        out.clear();
        std::array<std::ptrdiff_t, D> base;
        for (std::size_t k = 0; k < D; ++k)
            base[k] = static_cast<std::ptrdiff_t>((x[k] - lo_[k]) / cell_);
        std::array<std::ptrdiff_t, D> off{};
        off.fill(-1);
        for (;;) {
            bool ok = true;
            std::size_t idx = 0;
            for (std::size_t k = 0; k < D; ++k) {
                const std::ptrdiff_t c = base[k] + off[k];
                if (c < 0 || c >= static_cast<std::ptrdiff_t>(dims_[k])) {
                    ok = false;
                    break;
                }
                idx = idx * dims_[k] + static_cast<std::size_t>(c);
            }
            if (ok)
                out.insert(out.end(), cells_[idx].begin(), cells_[idx].end());
            // Advance the offset counter over {-1,0,1}^D.
            std::size_t k = 0;
            for (; k < D; ++k) {
                if (++off[k] <= 1) break;
                off[k] = -1;
            }
            if (k == D) break;
        }
        std::sort(out.begin(), out.end());
    }

private:
    std::size_t cell_index(const Vec<D>& p) const {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < D; ++k) {
            std::size_t c = static_cast<std::size_t>((p[k] - lo_[k]) / cell_);
            if (c >= dims_[k]) c = dims_[k] - 1;
            idx = idx * dims_[k] + c;
        }
        return idx;
    }

    double cell_;
    Vec<D> lo_;
    std::array<std::size_t, D> dims_;
    std::vector<std::vector<std::size_t>> cells_;
};

// ------------------------------------------------------------------
// Per-particle evaluation
// ------------------------------------------------------------------

namespace detail {

template <std::size_t D, typename PairTerm>
inline void for_each_pair(std::size_t i, std::size_t n, const NeighborGrid<D>* grid,
                          const Vec<D>& xi, std::vector<std::size_t>& scratch,
                          PairTerm&& term) {
    if (grid) {
        grid->gather(xi, scratch);
        for (std::size_t j : scratch)
            if (j != i) term(j);
    } else {
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) term(j);
    }
}

} // namespace detail

// Sharp-mode acceleration on particle i: the pair indicator is 1, 0, or the
// selection value according to the admissible-slope set at (x_i - x_j, v_i).
template <std::size_t D>
Vec<D> accel_sharp(const ForceModel<D>& model, const std::vector<Vec<D>>& positions,
                   const std::vector<Vec<D>>& velocities, const std::vector<double>& weights,
                   std::size_t i, const SelectionRule& selection, double tol_b,
                   const NeighborGrid<D>* grid = nullptr, std::uint64_t step = 0) {
    if (model.kind == ForceKind::FirstOrder)
        throw config_error("accel_sharp: first-order models evolve positions only; "
                           "use velocity_first_order");
    Vec<D> acc{};
    const Vec<D> xi = positions[i];
    const Vec<D> vi = velocities[i];
    const double cutoff2 = [&] {
        const double c = model.region.global_radius() + tol_b;
        return c * c;
    }();
    static thread_local std::vector<std::size_t> scratch;
    detail::for_each_pair<D>(i, positions.size(), grid, xi, scratch, [&](std::size_t j) {
        const Vec<D> dx = xi - positions[j];
        if (norm2(dx) > cutoff2) return; // exact zero: outside every K(v)
        double alpha;
        switch (model.region.slope_set(vi, dx, tol_b)) {
        case SlopeSet::One: alpha = 1.0; break;
        case SlopeSet::Zero: alpha = 0.0; return;
        default: alpha = selection(i, j, step); break;
        }
        if (model.kind == ForceKind::CuckerSmale) {
            const double k = alpha * weights[j] * model.psi(norm2(dx));
            acc += k * model.coupling(velocities[j] - vi);
        } else {
            acc += (alpha * weights[j]) * model.grad_phi(dx);
        }
    });
    return acc;
}

// Mollified-mode acceleration: the pair indicator is the smoothed one.
template <std::size_t D>
Vec<D> accel_mollified(const ForceModel<D>& model, const std::vector<Vec<D>>& positions,
                       const std::vector<Vec<D>>& velocities,
                       const std::vector<double>& weights, std::size_t i,
                       const MollifiedIndicator<D>& indicator,
                       const NeighborGrid<D>* grid = nullptr) {
    if (model.kind == ForceKind::FirstOrder)
        throw config_error("accel_mollified: first-order models evolve positions only");
    Vec<D> acc{};
    const Vec<D> xi = positions[i];
    const Vec<D> vi = velocities[i];
    const double cutoff = model.region.global_radius() + indicator.params().eps;
    const double cutoff2 = cutoff * cutoff;
    const auto alpha_at = indicator.for_velocity(vi); // shared across the pair loop
    static thread_local std::vector<std::size_t> scratch;
    detail::for_each_pair<D>(i, positions.size(), grid, xi, scratch, [&](std::size_t j) {
        const Vec<D> dx = xi - positions[j];
        if (norm2(dx) > cutoff2) return; // mollified support bound
        const double alpha = alpha_at(dx);
        if (alpha == 0.0) return;
        if (model.kind == ForceKind::CuckerSmale) {
            const double k = alpha * weights[j] * model.psi(norm2(dx));
            acc += k * model.coupling(velocities[j] - vi);
        } else {
            acc += (alpha * weights[j]) * model.grad_phi(dx);
        }
    });
    return acc;
}

// First-order transport velocity u_i for models with an orientational field:
// the region is evaluated at w(x_i) instead of a particle velocity.
template <std::size_t D>
Vec<D> velocity_first_order(const ForceModel<D>& model, const std::vector<Vec<D>>& positions,
                            const std::vector<double>& weights, std::size_t i,
                            const SelectionRule& selection, double tol_b,
                            const NeighborGrid<D>* grid = nullptr, std::uint64_t step = 0) {
    if (model.kind != ForceKind::FirstOrder)
        throw config_error("velocity_first_order: model is not first-order");
    Vec<D> u{};
    const Vec<D> xi = positions[i];
    const Vec<D> wi = model.w_field(xi);
    const double cutoff = model.region.global_radius() + tol_b;
    const double cutoff2 = cutoff * cutoff;
    static thread_local std::vector<std::size_t> scratch;
    detail::for_each_pair<D>(i, positions.size(), grid, xi, scratch, [&](std::size_t j) {
        const Vec<D> dx = xi - positions[j];
        if (norm2(dx) > cutoff2) return;
        double alpha;
        switch (model.region.slope_set(wi, dx, tol_b)) {
        case SlopeSet::One: alpha = 1.0; break;
        case SlopeSet::Zero: alpha = 0.0; return;
        default: alpha = selection(i, j, step); break;
        }
        u += (alpha * weights[j]) * model.grad_phi(dx);
    });
    return u;
}

// Analytic per-step bound |accel| <= sup|psi| * sup|h| over the velocity
// support (CS) or sup|grad phi| (AR).
template <std::size_t D>
double accel_bound(const ForceModel<D>& model, double max_speed) {
    if (model.kind == ForceKind::CuckerSmale)
        return model.psi.sup() * model.coupling.sup_on(2.0 * max_speed);
    return model.grad_phi.sup();
}

} // namespace swarmlab
