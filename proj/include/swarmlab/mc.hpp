#pragma once

// Monte-Carlo measure and inclusion estimators for the region hypotheses.
// Sampling is uniform on the ball B(0, global_radius + 1) in the displacement
// variable; with eps capped at 1 this ball always covers the sets of
// interest. The sample budget splits across workers on derived seeds and the
// partial counts combine in fixed order.

#include <cstdint>
#include <functional>
#include <vector>

#include "swarmlab/errors.hpp"
#include "swarmlab/regions.hpp"
#include "swarmlab/rng.hpp"
#include "swarmlab/util.hpp"

namespace swarmlab {

struct McEstimate {
    double estimate = 0.0;
    double std_err = 0.0;
    std::uint64_t n_samples = 0;
    int workers = 1;
};

// Which enlarged set to measure.
enum class BoundarySet { EpsBoundary, ThetaEnlarged };

namespace detail {

template <std::size_t D>
inline double ball_volume(double r) {
    if constexpr (D == 2) return kPi * r * r;
    else return 4.0 / 3.0 * kPi * r * r * r;
}

inline McEstimate
mc_fraction(std::uint64_t n_samples, std::uint64_t seed, int workers, double box_volume,
            const std::function<std::uint64_t(std::uint64_t, std::uint64_t)>& count_hits) {
    if (workers < 1) workers = 1;
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(workers), 0);
    const std::uint64_t per = n_samples / static_cast<std::uint64_t>(workers);
    const std::uint64_t rem = n_samples % static_cast<std::uint64_t>(workers);
    parallel_for(workers, workers, [&](std::int64_t w) {
        const std::uint64_t quota = per + (static_cast<std::uint64_t>(w) < rem ? 1 : 0);
        counts[static_cast<std::size_t>(w)] =
            count_hits(derive_seed(seed, static_cast<std::uint64_t>(w)), quota);
    });
    std::uint64_t hits = 0;
    for (std::uint64_t c : counts) hits += c;
    const double p = static_cast<double>(hits) / static_cast<double>(n_samples);
    McEstimate out;
    out.estimate = box_volume * p;
    out.std_err = box_volume * std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
    out.n_samples = n_samples;
    out.workers = workers;
    return out;
}

} // namespace detail

// Lebesgue measure of the eps-boundary of K(v) (or of the eps-enlargement of
// Theta(v)) by uniform rejection-free sampling in B(0, R_K + 1).
template <std::size_t D>
inline McEstimate measure_eps_boundary_mc(const RegionFamily<D>& region, const Vec<D>& v,
                                          double eps, std::uint64_t n_samples,
                                          std::uint64_t seed,
                                          BoundarySet set = BoundarySet::EpsBoundary,
                                          int workers = 1) {
    if (!(eps > 0.0) || eps > 1.0)
        throw config_error("measure_eps_boundary_mc: eps must lie in (0, 1]");
    if (n_samples < 1000)
        throw config_error("measure_eps_boundary_mc: need at least 1000 samples");
    const double box_r = region.global_radius() + 1.0;
    return detail::mc_fraction(
        n_samples, seed, workers, detail::ball_volume<D>(box_r),
        [&](std::uint64_t wseed, std::uint64_t quota) {
            Rng rng(wseed);
            std::uint64_t hits = 0;
            for (std::uint64_t k = 0; k < quota; ++k) {
                const Vec<D> x = rng.template uniform_in_ball<D>(box_r);
                const bool hit = set == BoundarySet::EpsBoundary
                                     ? std::abs(region.signed_distance(v, x)) <= eps
                                     : region.theta_distance(v, x) <= eps;
                if (hit) ++hits;
            }
            return hits;
        });
}

// Lebesgue measure of the symmetric difference K(v) delta K(w).
template <std::size_t D>
inline McEstimate measure_symmetric_difference_mc(const RegionFamily<D>& region,
                                                  const Vec<D>& v, const Vec<D>& w,
                                                  std::uint64_t n_samples,
                                                  std::uint64_t seed, int workers = 1) {
    if (n_samples < 1000)
        throw config_error("measure_symmetric_difference_mc: need at least 1000 samples");
    const double box_r = region.global_radius() + 1.0;
    return detail::mc_fraction(
        n_samples, seed, workers, detail::ball_volume<D>(box_r),
        [&](std::uint64_t wseed, std::uint64_t quota) {
            Rng rng(wseed);
            std::uint64_t hits = 0;
            for (std::uint64_t k = 0; k < quota; ++k) {
                const Vec<D> x = rng.template uniform_in_ball<D>(box_r);
                if (region.contains(v, x) != region.contains(w, x)) ++hits;
            }
            return hits;
        });
}

// Counts sampled points where A holds but B fails; 0 certifies that no
// counterexample to "A implies B" was found.
template <std::size_t D>
inline std::uint64_t
check_inclusion_sampled(const std::function<bool(const Vec<D>&)>& pred_a,
                        const std::function<bool(const Vec<D>&)>& pred_b,
                        const std::function<Vec<D>(Rng&)>& sampler,
                        std::uint64_t n_samples, std::uint64_t seed) {
    Rng rng(seed);
    std::uint64_t violations = 0;
    for (std::uint64_t k = 0; k < n_samples; ++k) {
        const Vec<D> x = sampler(rng);
        if (pred_a(x) && !pred_b(x)) ++violations;
    }
    return violations;
}

} // namespace swarmlab
