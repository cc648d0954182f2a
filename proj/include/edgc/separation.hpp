#pragma once

// Monte Carlo checks of the stochastic separation bounds.
//
// Every estimator is a pure function of its inputs and seed. Trial t draws
// from substream t of the seed, so a run split over several workers gives
// the same report as a sequential one.

#include "edgc/types.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace edgc::lab {

/// Constants of the non-concentration assumptions plus dimension and sample size.
/// The built-in uniform-ball sampler satisfies both assumptions with C = 1, r = 1.
struct BoundParams {
    double C = 1.0;
    double r = 1.0;
    Index n = 1;
    Index M = 1;
};

struct SeparabilityReport {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double empirical_frequency = 0.0;
    double theoretical_bound = 0.0;
    double standard_error = 0.0;  ///< binomial, sqrt(f(1-f)/trials)
    bool vacuous = false;         ///< bound <= 0 carries no information

    static SeparabilityReport from_counts(std::uint64_t successes, std::uint64_t trials, double bound);

    /// empirical + z * SE >= bound.
    bool dominates_bound(double z = 3.0) const noexcept
    {
        return empirical_frequency + z * standard_error >= theoretical_bound;
    }
};

// Samplers --------------------------------------------------------------

/// Uniform in the unit n-ball: Gaussian direction scaled by U^(1/n).
RowMatrix sample_unit_ball(Index n, Index count, std::uint64_t seed);

/// Uniform in the unit ball centred at epsilon * e_1.
RowMatrix sample_shifted_ball(Index n, Index count, double epsilon, std::uint64_t seed);

/// Fills each row of `out` with an independent uniform-ball point.
void fill_unit_ball(Eigen::Ref<RowMatrix> out, std::mt19937_64& rng);

// Closed-form bounds ----------------------------------------------------

/// max(0, 1 - M C (r/2)^n); throws InvalidInput unless r in (0, 2).
double theorem1_bound(const BoundParams& params);

/// Smallest n >= 0 with n >= (log M + log C - log delta) / (log 2 - log r), up to 1e-9 slack.
/// Throws InvalidInput unless r in (0, 2) and delta in (0, 1).
Index min_dimension(double M, double C, double delta, double r);

struct Theorem3Bounds {
    double point_from_set = 0.0;  ///< 1 - M C ((1 - |y|^2)^(1/2) r)^n, clamped to [0, 1]
    double set_from_point = 0.0;  ///< 1 - M C (|y| r)^n, clamped to [0, 1]
    bool point_from_set_vacuous = false;
    bool set_from_point_vacuous = false;
};

/// Throws InvalidInput unless 0 <= y_norm <= 1.
Theorem3Bounds theorem3_bounds(double y_norm, const BoundParams& params);

/// max(0, 1 - M C (r / sqrt 2)^n); throws InvalidInput unless 0 < r < sqrt 2.
double corollary1_bound(const BoundParams& params);

struct Remark2Bounds {
    double rho_x = 1.0;  ///< (1 - kappa^2 eps^2)^(n/2)
    double rho_y = 1.0;  ///< (1 - (1-kappa)^2 eps^2)^(n/2)
};

/// Throws InvalidInput unless kappa in (0,1), eps >= 0, kappa eps <= 1, (1-kappa) eps <= 1.
Remark2Bounds remark2_bounds(double kappa, double epsilon, Index n);

// Estimators ------------------------------------------------------------

/// Each trial draws M points and one query from the uniform ball and checks
/// Fisher separability of the query from the sample.
SeparabilityReport estimate_theorem1(const BoundParams& params, std::uint64_t trials, std::uint64_t seed,
                                     unsigned workers = 1);

struct Theorem3Reports {
    SeparabilityReport point_from_set;
    SeparabilityReport set_from_point;
};

/// Fixes y = y_norm * e_1 and draws the sample from the uniform ball.
Theorem3Reports estimate_theorem3(double y_norm, const BoundParams& params, std::uint64_t trials,
                                  std::uint64_t seed, unsigned workers = 1);

struct DichotomyOutcome {
    bool point_separable = false;  ///< y Fisher separable from the sample
    bool set_separable = false;    ///< every sample point Fisher separable from y
    bool inside_half_ball = false; ///< |y| <= 1/sqrt 2

    bool holds() const noexcept { return point_separable || (set_separable && inside_half_ball); }
};

DichotomyOutcome dichotomy_outcome(const Eigen::Ref<const Vector>& y, const RowMatrix& sample);

/// Draws the query point; defaults to the uniform ball.
using PointSampler = std::function<Vector(Index n, std::mt19937_64& rng)>;

SeparabilityReport check_dichotomy(Index n, Index M, std::uint64_t trials, std::uint64_t seed,
                                   const PointSampler& y_sampler = {}, unsigned workers = 1);

struct Remark2Estimate {
    Index count = 0;
    double missed_x = 0.0;  ///< X points with h <= 0
    double leaked_y = 0.0;  ///< Y points with h > 0
    double missed_x_se = 0.0;
    double leaked_y_se = 0.0;
    Remark2Bounds bounds;

    bool within_bounds(double z = 3.0) const noexcept
    {
        return missed_x <= bounds.rho_x + z * missed_x_se && leaked_y <= bounds.rho_y + z * leaked_y_se;
    }
};

/// Classifies `count` points from each ball by h(z) = (z, w) + kappa eps, w = -ybar/eps.
Remark2Estimate estimate_remark2(double kappa, double epsilon, Index n, Index count, std::uint64_t seed);

/// Draws coefficient vectors alpha in R^d; must be deterministic given the generator state.
using CoefficientSampler = std::function<Vector(std::mt19937_64& rng)>;

struct Theorem2Estimate {
    SeparabilityReport report;         ///< successes: every H(alpha, x_i) > 0
    double failure_mass = 0.0;         ///< estimate of sum_i P[H(alpha, x_i) <= 0]
    std::vector<double> point_failure; ///< per-point P[H(alpha, x_i) <= 0]
};

/// H(alpha, x) = (w, w) - (w, x) with w = sum_k alpha_k z_k. The report's bound is
/// 1 - failure_mass (not clamped). Throws InvalidInput on dimension mismatch.
Theorem2Estimate estimate_theorem2(const CoefficientSampler& alpha_sampler, const RowMatrix& z_basis,
                                   const RowMatrix& sample, std::uint64_t trials, std::uint64_t seed);

}  // namespace edgc::lab
