#pragma once

// Explicit Euler time integration of the N-particle system in sharp
// (differential-inclusion selection) and mollified modes. One step is a
// Jacobi update against the pre-step snapshot, so per-particle evaluation
// parallelizes without changing a single bit of the result. The integrator is
// first order on purpose: the right-hand side is discontinuous in sharp mode
// and the convex-combination max-speed argument is exact for Euler.

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "swarmlab/errors.hpp"
#include "swarmlab/forces.hpp"
#include "swarmlab/transport.hpp"
#include "swarmlab/util.hpp"

namespace swarmlab {

template <std::size_t D>
struct ParticleState {
    std::vector<Vec<D>> positions;
    std::vector<Vec<D>> velocities;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }

    void validate() const {
        if (size() < 1) throw config_error("state: N must be >= 1");
        if (positions.size() != size() || velocities.size() != size())
            throw config_error("state: array sizes disagree");
        double total = 0.0;
        for (double m : weights) {
            if (!(m > 0.0)) throw config_error("state: weights must be strictly positive");
            total += m;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw config_error("state: weights must sum to 1 (within 1e-12)");
    }
};

enum class ModeKind { Sharp, Mollified };

template <std::size_t D>
struct SimConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    std::size_t record_every = 1;
    ModeKind mode = ModeKind::Sharp;
    SelectionRule selection;
    double tol_b = 1e-7;
    MollifierParams mollifier;
    ForceModel<D> force;
    bool use_grid = true;
    int workers = 1;
    // Assert per-step max-speed monotonicity (exact for CS with h = id and
    // dt * sup psi <= 1; enable only then).
    bool check_max_speed = false;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(dt > 0.0)) throw config_error("dynamics: dt must be positive");
        if (!(t_end >= 0.0)) throw config_error("dynamics: t_end must be >= 0");
        if (record_every < 1) throw config_error("dynamics: record_every must be >= 1");
        if (!(tol_b > 0.0)) throw config_error("dynamics: tol_b must be positive");
        force.validate();
        if (mode == ModeKind::Mollified) mollifier.validate();
        if (force.kind == ForceKind::FirstOrder)
            throw config_error("dynamics: first-order models have no second-order step; "
                               "evaluate velocity_first_order directly");
        if (check_max_speed) {
            if (force.kind != ForceKind::CuckerSmale ||
                coupling_kind() != VelocityCoupling::Kind::Identity)
                throw config_error("dynamics: max-speed check applies to CS with h = id only");
            if (dt * force.psi.sup() > 1.0)
                throw config_error("dynamics: max-speed check needs dt * sup psi <= 1");
        }
    }

    VelocityCoupling::Kind coupling_kind() const { return force.coupling.kind; }
};

template <std::size_t D>
struct StepDiag {
    double t = 0.0;
    double max_speed = 0.0;
    Vec<D> momentum{};
    double kinetic = 0.0;
};

template <std::size_t D>
struct Trajectory {
    std::vector<double> snapshot_times;
    std::vector<ParticleState<D>> snapshots;
    std::vector<StepDiag<D>> diagnostics; // every step, including t = 0
};

template <std::size_t D>
inline double max_speed(const ParticleState<D>& s) {
    double m = 0.0;
    for (const auto& v : s.velocities) m = std::max(m, norm(v));
    return m;
}

template <std::size_t D>
inline Vec<D> momentum(const ParticleState<D>& s) {
    Vec<D> p{};
    for (std::size_t i = 0; i < s.size(); ++i) p += s.weights[i] * s.velocities[i];
    return p;
}

template <std::size_t D>
inline double kinetic_energy(const ParticleState<D>& s) {
    double e = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) e += 0.5 * s.weights[i] * norm2(s.velocities[i]);
    return e;
}

template <std::size_t D>
inline StepDiag<D> make_diag(double t, const ParticleState<D>& s) {
    return {t, max_speed(s), momentum(s), kinetic_energy(s)};
}

// Max speed of every recorded diagnostic: the numerical stand-in for the
// velocity support radius along the run.
template <std::size_t D>
inline std::vector<double> velocity_support_radius(const Trajectory<D>& traj) {
    std::vector<double> out;
    out.reserve(traj.diagnostics.size());
    for (const auto& d : traj.diagnostics) out.push_back(d.max_speed);
    return out;
}

// Lossless repackaging as a weighted point cloud in phase space.
template <std::size_t D>
inline DiscreteMeasure to_measure(const ParticleState<D>& s) {
    DiscreteMeasure mu;
    mu.dim = 2 * D;
    mu.weights = s.weights;
    mu.points.resize(s.size() * 2 * D);
    for (std::size_t i = 0; i < s.size(); ++i) {
        double* p = mu.point(i);
        for (std::size_t k = 0; k < D; ++k) p[k] = s.positions[i][k];
        for (std::size_t k = 0; k < D; ++k) p[D + k] = s.velocities[i][k];
    }
    return mu;
}

namespace detail {

template <std::size_t D>
class StepContext {
public:
    StepContext(const SimConfig<D>& cfg)
        : cfg_(cfg),
          indicator_(cfg.mode == ModeKind::Mollified
                         ? std::make_unique<MollifiedIndicator<D>>(cfg.force.region,
                                                                   cfg.mollifier)
                         : nullptr) {}

    // One Euler step against the pre-step snapshot; weights pass through.
    ParticleState<D> step(const ParticleState<D>& s, std::uint64_t step_index,
                          double t_now) const {
        const std::size_t n = s.size();
        ParticleState<D> next;
        next.positions.resize(n);
        next.velocities.resize(n);
        next.weights = s.weights;

        std::unique_ptr<NeighborGrid<D>> grid;
        if (cfg_.use_grid && n > 16) {
            const double cutoff = cfg_.force.region.global_radius() +
                                  (cfg_.mode == ModeKind::Mollified ? cfg_.mollifier.eps
                                                                    : cfg_.tol_b);
            grid = std::make_unique<NeighborGrid<D>>(s.positions, cutoff);
        }

        parallel_for(static_cast<std::int64_t>(n), cfg_.workers, [&](std::int64_t ii) {
            const std::size_t i = static_cast<std::size_t>(ii);
            const Vec<D> a = cfg_.mode == ModeKind::Sharp
                                 ? accel_sharp(cfg_.force, s.positions, s.velocities,
                                               s.weights, i, cfg_.selection, cfg_.tol_b,
                                               grid.get(), step_index)
                                 : accel_mollified(cfg_.force, s.positions, s.velocities,
                                                   s.weights, i, *indicator_, grid.get());
            next.positions[i] = s.positions[i] + cfg_.dt * s.velocities[i];
            next.velocities[i] = s.velocities[i] + cfg_.dt * a;
        });

        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < D; ++k)
                if (!std::isfinite(next.positions[i][k]) || !std::isfinite(next.velocities[i][k]))
                    throw numeric_error("dynamics: non-finite state at t = " +
                                        std::to_string(t_now + cfg_.dt));
        return next;
    }

private:
    const SimConfig<D>& cfg_;
    std::unique_ptr<MollifiedIndicator<D>> indicator_;
};

} // namespace detail

// Single public step; builds its evaluation context on the fly.
template <std::size_t D>
inline ParticleState<D> step(const ParticleState<D>& s, const SimConfig<D>& cfg,
                             std::uint64_t step_index = 0) {
    cfg.validate();
    s.validate();
    detail::StepContext<D> ctx(cfg);
    return ctx.step(s, step_index, static_cast<double>(step_index) * cfg.dt);
}

template <std::size_t D>
inline Trajectory<D> simulate(const ParticleState<D>& initial, const SimConfig<D>& cfg) {
    cfg.validate();
    initial.validate();
    const std::uint64_t steps = static_cast<std::uint64_t>(std::llround(cfg.t_end / cfg.dt));
    detail::StepContext<D> ctx(cfg);

    Trajectory<D> traj;
    traj.diagnostics.reserve(steps + 1);
    traj.diagnostics.push_back(make_diag(0.0, initial));
    traj.snapshot_times.push_back(0.0);
    traj.snapshots.push_back(initial);

    ParticleState<D> state = initial;
    double prev_max = traj.diagnostics.front().max_speed;
    for (std::uint64_t k = 0; k < steps; ++k) {
        const double t_now = static_cast<double>(k) * cfg.dt;
        state = ctx.step(state, k, t_now);
        const double t_next = static_cast<double>(k + 1) * cfg.dt;
        traj.diagnostics.push_back(make_diag(t_next, state));
        if (cfg.check_max_speed) {
            const double ms = traj.diagnostics.back().max_speed;
            if (ms > prev_max + 1e-12)
                throw numeric_error("dynamics: max-speed monotonicity violated at t = " +
                                    std::to_string(t_next));
            prev_max = ms;
        }
        if ((k + 1) % cfg.record_every == 0 || k + 1 == steps) {
            traj.snapshot_times.push_back(t_next);
            traj.snapshots.push_back(state);
        }
    }
    return traj;
}

} // namespace swarmlab
