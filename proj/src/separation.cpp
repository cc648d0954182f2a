#include "edgc/separation.hpp"

#include "edgc/discriminant.hpp"
#include "edgc/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <thread>

namespace edgc::lab {

namespace {

void require_dimension(Index n, Index M)
{
    if (n < 1) {
        throw InvalidInput("dimension n must be >= 1");
    }
    if (M < 1) {
        throw InvalidInput("sample size M must be >= 1");
    }
}

void require_positive_C(double C)
{
    if (!(C > 0.0)) {
        throw InvalidInput("constant C must be positive");
    }
}

// Runs `trial(rng, scratch)` for every trial index, each on its own substream,
// and counts how often each of its N outcomes was true.
template <std::size_t N, class MakeScratch, class Trial>
std::array<std::uint64_t, N> tally(std::uint64_t trials, std::uint64_t seed, unsigned workers,
                                   MakeScratch make_scratch, Trial trial)
{
    workers = std::max(1u, workers);
    std::vector<std::array<std::uint64_t, N>> partial(workers, std::array<std::uint64_t, N>{});
    auto run = [&](unsigned w) {
        auto scratch = make_scratch();
        const std::uint64_t begin = trials * w / workers;
        const std::uint64_t end = trials * (w + 1) / workers;
        for (std::uint64_t t = begin; t < end; ++t) {
            std::mt19937_64 rng = substream(seed, t);
            const std::array<bool, N> outcome = trial(rng, scratch);
            for (std::size_t i = 0; i < N; ++i) {
                partial[w][i] += outcome[i] ? 1 : 0;
            }
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    std::array<std::uint64_t, N> total{};
    for (const auto& p : partial) {
        for (std::size_t i = 0; i < N; ++i) {
            total[i] += p[i];
        }
    }
    return total;
}

void fill_ball_point(Eigen::Ref<Vector> out, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    double norm2 = 0.0;
    do {
        for (Index j = 0; j < out.size(); ++j) {
            out(j) = normal(rng);
        }
        norm2 = out.squaredNorm();
    } while (norm2 == 0.0);
    const double radius = std::pow(uniform(rng), 1.0 / static_cast<double>(out.size()));
    out *= radius / std::sqrt(norm2);
}

// Every row x of `sample` satisfies (x, x) > (x, y).
bool every_point_separable_from(const RowMatrix& sample, const Eigen::Ref<const Vector>& y)
{
    const Vector self = sample.rowwise().squaredNorm();
    const Vector cross = sample * y;
    for (Index i = 0; i < sample.rows(); ++i) {
        if (!(self(i) > cross(i))) {
            return false;
        }
    }
    return true;
}

}  // namespace

SeparabilityReport SeparabilityReport::from_counts(std::uint64_t successes, std::uint64_t trials, double bound)
{
    SeparabilityReport r;
    r.trials = trials;
    r.successes = successes;
    r.empirical_frequency = trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
    r.standard_error = trials == 0 ? 0.0
                                   : std::sqrt(r.empirical_frequency * (1.0 - r.empirical_frequency) /
                                               static_cast<double>(trials));
    r.theoretical_bound = bound;
    r.vacuous = !(bound > 0.0);
    return r;
}

void fill_unit_ball(Eigen::Ref<RowMatrix> out, std::mt19937_64& rng)
{
    Vector point(out.cols());
    for (Index i = 0; i < out.rows(); ++i) {
        fill_ball_point(point, rng);
        out.row(i) = point.transpose();
    }
}

RowMatrix sample_unit_ball(Index n, Index count, std::uint64_t seed)
{
    if (n < 1 || count < 1) {
        throw InvalidInput("unit-ball sampling needs n >= 1 and count >= 1");
    }
    std::mt19937_64 rng(seed);
    RowMatrix out(count, n);
    fill_unit_ball(out, rng);
    return out;
}

RowMatrix sample_shifted_ball(Index n, Index count, double epsilon, std::uint64_t seed)
{
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw InvalidInput("ball shift must be a finite non-negative number");
    }
    RowMatrix out = sample_unit_ball(n, count, seed);
    out.col(0).array() += epsilon;
    return out;
}

double theorem1_bound(const BoundParams& p)
{
    if (!(p.r > 0.0 && p.r < 2.0)) {
        throw InvalidInput("bound needs r in (0, 2)");
    }
    require_positive_C(p.C);
    require_dimension(p.n, p.M);
    const double bound = 1.0 - static_cast<double>(p.M) * p.C * std::pow(p.r / 2.0, static_cast<double>(p.n));
    return std::max(0.0, bound);
}

Index min_dimension(double M, double C, double delta, double r)
{
    if (!(r > 0.0 && r < 2.0)) {
        throw InvalidInput("minimum dimension needs r in (0, 2)");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InvalidInput("minimum dimension needs delta in (0, 1)");
    }
    if (!(M >= 1.0)) {
        throw InvalidInput("minimum dimension needs M >= 1");
    }
    require_positive_C(C);
    const double rhs = (std::log(M) + std::log(C) - std::log(delta)) / (std::log(2.0) - std::log(r));
    // The slack absorbs rounding in the logarithms, so an exact integer bound is not pushed up by one.
    const double n = std::ceil(rhs - 1e-9);
    return n <= 0.0 ? 0 : static_cast<Index>(n);
}

Theorem3Bounds theorem3_bounds(double y_norm, const BoundParams& p)
{
    if (!(y_norm >= 0.0 && y_norm <= 1.0)) {
        throw InvalidInput("|y| must lie in [0, 1]");
    }
    if (!(p.r >= 0.0)) {
        throw InvalidInput("r must be non-negative");
    }
    require_positive_C(p.C);
    require_dimension(p.n, p.M);
    const double scale = static_cast<double>(p.M) * p.C;
    const double exponent = static_cast<double>(p.n);
    const double a = 1.0 - scale * std::pow(std::sqrt(1.0 - y_norm * y_norm) * p.r, exponent);
    const double b = 1.0 - scale * std::pow(y_norm * p.r, exponent);
    Theorem3Bounds out;
    out.point_from_set = std::clamp(a, 0.0, 1.0);
    out.set_from_point = std::clamp(b, 0.0, 1.0);
    out.point_from_set_vacuous = !(a > 0.0);
    out.set_from_point_vacuous = !(b > 0.0);
    return out;
}

double corollary1_bound(const BoundParams& p)
{
    if (!(p.r > 0.0 && p.r < std::sqrt(2.0))) {
        throw InvalidInput("dichotomy bound needs r in (0, sqrt 2)");
    }
    require_positive_C(p.C);
    require_dimension(p.n, p.M);
    const double bound =
        1.0 - static_cast<double>(p.M) * p.C * std::pow(p.r / std::sqrt(2.0), static_cast<double>(p.n));
    return std::max(0.0, bound);
}

Remark2Bounds remark2_bounds(double kappa, double epsilon, Index n)
{
    if (!(kappa > 0.0 && kappa < 1.0)) {
        throw InvalidInput("kappa must lie in (0, 1)");
    }
    if (!(epsilon >= 0.0) || kappa * epsilon > 1.0 || (1.0 - kappa) * epsilon > 1.0) {
        throw InvalidInput("remark bounds need eps >= 0, kappa eps <= 1 and (1 - kappa) eps <= 1");
    }
    if (n < 0) {
        throw InvalidInput("dimension must be non-negative");
    }
    const double half_n = static_cast<double>(n) / 2.0;
    Remark2Bounds out;
    out.rho_x = std::pow(1.0 - kappa * kappa * epsilon * epsilon, half_n);
    out.rho_y = std::pow(1.0 - (1.0 - kappa) * (1.0 - kappa) * epsilon * epsilon, half_n);
    return out;
}

SeparabilityReport estimate_theorem1(const BoundParams& params, std::uint64_t trials, std::uint64_t seed,
                                     unsigned workers)
{
    const double bound = theorem1_bound(params);
    const Index n = params.n;
    const Index M = params.M;
    struct Scratch {
        RowMatrix sample;
        Vector query;
    };
    const auto counts = tally<1>(
        trials, seed, workers, [&] { return Scratch{RowMatrix(M, n), Vector(n)}; },
        [&](std::mt19937_64& rng, Scratch& s) {
            fill_unit_ball(s.sample, rng);
            fill_ball_point(s.query, rng);
            return std::array<bool, 1>{fisher_separable(s.query, s.sample, 1.0)};
        });
    return SeparabilityReport::from_counts(counts[0], trials, bound);
}

Theorem3Reports estimate_theorem3(double y_norm, const BoundParams& params, std::uint64_t trials,
                                  std::uint64_t seed, unsigned workers)
{
    const Theorem3Bounds bounds = theorem3_bounds(y_norm, params);
    const Index n = params.n;
    const Index M = params.M;
    Vector y = Vector::Zero(n);
    y(0) = y_norm;
    const auto counts = tally<2>(
        trials, seed, workers, [&] { return RowMatrix(M, n); },
        [&](std::mt19937_64& rng, RowMatrix& sample) {
            fill_unit_ball(sample, rng);
            return std::array<bool, 2>{fisher_separable(y, sample, 1.0), every_point_separable_from(sample, y)};
        });
    Theorem3Reports out;
    out.point_from_set = SeparabilityReport::from_counts(counts[0], trials, bounds.point_from_set);
    out.set_from_point = SeparabilityReport::from_counts(counts[1], trials, bounds.set_from_point);
    out.point_from_set.vacuous = bounds.point_from_set_vacuous;
    out.set_from_point.vacuous = bounds.set_from_point_vacuous;
    return out;
}

DichotomyOutcome dichotomy_outcome(const Eigen::Ref<const Vector>& y, const RowMatrix& sample)
{
    DichotomyOutcome out;
    out.point_separable = fisher_separable(y, sample, 1.0);
    out.set_separable = every_point_separable_from(sample, y);
    out.inside_half_ball = y.squaredNorm() <= 0.5;
    return out;
}

SeparabilityReport check_dichotomy(Index n, Index M, std::uint64_t trials, std::uint64_t seed,
                                   const PointSampler& y_sampler, unsigned workers)
{
    const double bound = corollary1_bound(BoundParams{1.0, 1.0, n, M});
    struct Scratch {
        RowMatrix sample;
        Vector query;
    };
    const auto counts = tally<1>(
        trials, seed, workers, [&] { return Scratch{RowMatrix(M, n), Vector(n)}; },
        [&](std::mt19937_64& rng, Scratch& s) {
            fill_unit_ball(s.sample, rng);
            if (y_sampler) {
                s.query = y_sampler(n, rng);
                if (s.query.size() != n) {
                    throw InvalidInput("query sampler returned the wrong dimension");
                }
            } else {
                fill_ball_point(s.query, rng);
            }
            return std::array<bool, 1>{dichotomy_outcome(s.query, s.sample).holds()};
        });
    return SeparabilityReport::from_counts(counts[0], trials, bound);
}

Remark2Estimate estimate_remark2(double kappa, double epsilon, Index n, Index count, std::uint64_t seed)
{
    if (n < 1 || count < 1) {
        throw InvalidInput("remark estimate needs n >= 1 and count >= 1");
    }
    Remark2Estimate out;
    out.bounds = remark2_bounds(kappa, epsilon, n);
    out.count = count;

    // ybar = eps e_1, so w = -ybar / eps = -e_1 (taken as -e_1 when eps = 0).
    Vector w = Vector::Zero(n);
    w(0) = -1.0;
    const double offset = kappa * epsilon;

    std::mt19937_64 x_rng = substream(seed, 0);
    std::mt19937_64 y_rng = substream(seed, 1);
    Vector point(n);
    Index missed = 0;
    Index leaked = 0;
    for (Index i = 0; i < count; ++i) {
        fill_ball_point(point, x_rng);
        if (point.dot(w) + offset <= 0.0) {
            ++missed;
        }
        fill_ball_point(point, y_rng);
        point(0) += epsilon;
        if (point.dot(w) + offset > 0.0) {
            ++leaked;
        }
    }
    const double c = static_cast<double>(count);
    out.missed_x = static_cast<double>(missed) / c;
    out.leaked_y = static_cast<double>(leaked) / c;
    out.missed_x_se = std::sqrt(out.missed_x * (1.0 - out.missed_x) / c);
    out.leaked_y_se = std::sqrt(out.leaked_y * (1.0 - out.leaked_y) / c);
    return out;
}

Theorem2Estimate estimate_theorem2(const CoefficientSampler& alpha_sampler, const RowMatrix& z_basis,
                                   const RowMatrix& sample, std::uint64_t trials, std::uint64_t seed)
{
    if (!alpha_sampler) {
        throw InvalidInput("coefficient sampler is required");
    }
    if (z_basis.rows() < 1) {
        throw InvalidInput("z basis needs at least one vector");
    }
    if (z_basis.cols() != sample.cols()) {
        throw InvalidInput("z basis width " + std::to_string(z_basis.cols()) + " differs from sample width " +
                           std::to_string(sample.cols()));
    }
    const Index d = z_basis.rows();
    std::vector<std::uint64_t> failures(static_cast<std::size_t>(sample.rows()), 0);
    std::uint64_t successes = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::mt19937_64 rng = substream(seed, t);
        const Vector alpha = alpha_sampler(rng);
        if (alpha.size() != d) {
            throw InvalidInput("coefficient sampler returned " + std::to_string(alpha.size()) +
                               " values, expected " + std::to_string(d));
        }
        const Vector w = z_basis.transpose() * alpha;
        const double self = w.squaredNorm();
        const Vector cross = sample * w;
        bool all = true;
        for (Index i = 0; i < sample.rows(); ++i) {
            if (!(self - cross(i) > 0.0)) {
                ++failures[static_cast<std::size_t>(i)];
                all = false;
            }
        }
        successes += all ? 1 : 0;
    }
    Theorem2Estimate out;
    out.point_failure.reserve(failures.size());
    for (std::uint64_t f : failures) {
        const double p = trials == 0 ? 0.0 : static_cast<double>(f) / static_cast<double>(trials);
        out.point_failure.push_back(p);
        out.failure_mass += p;
    }
    out.report = SeparabilityReport::from_counts(successes, trials, 1.0 - out.failure_mass);
    return out;
}

}  // namespace edgc::lab
