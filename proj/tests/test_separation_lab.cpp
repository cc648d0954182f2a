#include "support.hpp"

#include "edgc/discriminant.hpp"
#include "edgc/random.hpp"
#include "edgc/separation.hpp"

#include <doctest.h>

#include <cmath>

using namespace edgc;
using namespace edgc::lab;

namespace {

// Definition 3 applied literally: (x, x) > (x, y) for every y.
bool separable_naive(const Vector& x, const RowMatrix& set)
{
    for (Index i = 0; i < set.rows(); ++i) {
        double xx = 0.0;
        double xy = 0.0;
        for (Index j = 0; j < x.size(); ++j) {
            xx += x(j) * x(j);
            xy += x(j) * set(i, j);
        }
        if (!(xx > xy)) {
            return false;
        }
    }
    return true;
}

BoundParams params(double C, double r, Index n, Index M) { return BoundParams{C, r, n, M}; }

}  // namespace

TEST_SUITE("samplers")
{
    TEST_CASE("unit-ball support and determinism")
    {
        const RowMatrix a = sample_unit_ball(7, 2000, 3);
        CHECK(a.rowwise().norm().maxCoeff() <= 1.0);
        CHECK(a == sample_unit_ball(7, 2000, 3));
        CHECK(a != sample_unit_ball(7, 2000, 4));
    }

    TEST_CASE("n = 2: a quarter of the mass lies within radius 1/2")
    {
        const Index count = 100000;
        const RowMatrix p = sample_unit_ball(2, count, 5);
        const double frac = (p.rowwise().norm().array() <= 0.5).cast<double>().mean();
        const double se = std::sqrt(0.25 * 0.75 / static_cast<double>(count));
        CHECK(std::abs(frac - 0.25) <= 3.0 * se);
    }

    TEST_CASE("n = 30: mean radius n/(n+1)")
    {
        const Index n = 30;
        const Index count = 10000;
        const Vector radius = sample_unit_ball(n, count, 6).rowwise().norm();
        const double mean = radius.mean();
        // Radius density n t^(n-1): variance n/(n+2) - (n/(n+1))^2.
        const double nn = static_cast<double>(n);
        const double var = nn / (nn + 2.0) - std::pow(nn / (nn + 1.0), 2);
        CHECK(std::abs(mean - nn / (nn + 1.0)) <= 3.0 * std::sqrt(var / static_cast<double>(count)));
    }

    TEST_CASE("shifted ball")
    {
        CHECK(sample_shifted_ball(5, 100, 0.0, 9) == sample_unit_ball(5, 100, 9));
        RowMatrix p = sample_shifted_ball(4, 5000, 0.3, 10);
        p.col(0).array() -= 0.3;
        CHECK(p.rowwise().norm().maxCoeff() <= 1.0 + 1e-15);

        const Index count = 100000;
        const RowMatrix q = sample_shifted_ball(2, count, 0.5, 11);
        // Each coordinate of a uniform disc point has variance 1/4.
        const double se = std::sqrt(0.25 / static_cast<double>(count));
        CHECK(std::abs(q.col(0).mean() - 0.5) <= 3.0 * se);
        CHECK(std::abs(q.col(1).mean()) <= 3.0 * se);
    }
}

TEST_SUITE("closed-form bounds")
{
    TEST_CASE("theorem 1")
    {
        CHECK(theorem1_bound(params(100, 1, 30, 10000)) == doctest::Approx(1.0 - 1e6 * std::pow(2.0, -30)));
        CHECK(theorem1_bound(params(100, 1, 30, 10000)) == doctest::Approx(0.99907).epsilon(1e-5));
        CHECK(theorem1_bound(params(1, 1, 10, 1)) == 0.9990234375);
        CHECK(theorem1_bound(params(1, 2.0 - 1e-9, 1, 1)) == doctest::Approx(0.0).epsilon(1e-8));
        CHECK(theorem1_bound(params(1, 1, 1, 1000)) == 0.0);
        CHECK_THROWS_AS(theorem1_bound(params(1, 2, 5, 1)), InvalidInput);
        CHECK_THROWS_AS(theorem1_bound(params(1, 0, 5, 1)), InvalidInput);
    }

    TEST_CASE("theorem 1 bound increases with n once positive")
    {
        double previous = theorem1_bound(params(3, 1.2, 1, 50));
        for (Index n = 2; n < 80; ++n) {
            const double b = theorem1_bound(params(3, 1.2, n, 50));
            if (previous > 0.0) {
                CHECK(b > previous);
            }
            previous = b;
        }
    }

    TEST_CASE("minimum dimension")
    {
        CHECK(min_dimension(1e4, 1e2, 1e-3, 1.0) == 30);
        CHECK(min_dimension(1e3, 1e2, 1e-3, 1.0) == 27);
        CHECK(min_dimension(1.0, 1.0, 1.0 - 1e-12, 1.0) == 0);
        CHECK(min_dimension(1.0, 1.0, 0.9, 1.0) == 1);
        CHECK_THROWS_AS(min_dimension(10, 1, 0.1, 2.0), InvalidInput);
        CHECK_THROWS_AS(min_dimension(10, 1, 1.0, 1.0), InvalidInput);
        // The returned n satisfies the inequality and n - 1 does not.
        for (const double M : {10.0, 500.0, 1e5}) {
            const Index n = min_dimension(M, 2.0, 1e-2, 0.7);
            const double rhs = (std::log(M) + std::log(2.0) - std::log(1e-2)) / (std::log(2.0) - std::log(0.7));
            CHECK(static_cast<double>(n) >= rhs);
            CHECK(static_cast<double>(n - 1) < rhs);
        }
    }

    TEST_CASE("theorem 3")
    {
        const BoundParams p = params(1, 1, 40, 1000);
        const Theorem3Bounds at_one = theorem3_bounds(1.0, p);
        CHECK(at_one.point_from_set == 1.0);
        CHECK(at_one.set_from_point == 0.0);  // 1 - M C r^n = 1 - 1000 clamps to 0
        CHECK(at_one.set_from_point_vacuous);
        const Theorem3Bounds at_zero = theorem3_bounds(0.0, p);
        CHECK(at_zero.set_from_point == 1.0);
        CHECK(at_zero.point_from_set == 0.0);

        const Theorem3Bounds unclamped = theorem3_bounds(1.0, params(1, 0.5, 10, 3));
        CHECK(unclamped.set_from_point == doctest::Approx(1.0 - 3.0 * std::pow(0.5, 10)));

        const Theorem3Bounds mid = theorem3_bounds(1.0 / std::sqrt(2.0), p);
        const double expected = 1.0 - 1000.0 * std::pow(2.0, -20);
        CHECK(mid.point_from_set == doctest::Approx(expected).epsilon(1e-12));
        CHECK(mid.set_from_point == doctest::Approx(expected).epsilon(1e-12));
        CHECK_FALSE(mid.point_from_set_vacuous);
        CHECK_THROWS_AS(theorem3_bounds(1.5, p), InvalidInput);
    }

    TEST_CASE("corollary 1")
    {
        CHECK(corollary1_bound(params(1, 1, 25, 500)) == doctest::Approx(1.0 - 500.0 * std::pow(2.0, -12.5)));
        CHECK(corollary1_bound(params(1, 1, 2, 1)) == doctest::Approx(0.5));
        CHECK_THROWS_AS(corollary1_bound(params(1, 1.5, 2, 1)), InvalidInput);
    }

    TEST_CASE("remark 2")
    {
        const Remark2Bounds b = remark2_bounds(0.5, 0.1, 1000);
        const double expected = std::pow(1.0 - 0.0025, 500);
        CHECK(b.rho_x == doctest::Approx(expected).epsilon(1e-14));
        CHECK(b.rho_x == b.rho_y);
        CHECK(b.rho_x == doctest::Approx(0.2861).epsilon(1e-3));
        CHECK(remark2_bounds(0.5, 0.0, 100).rho_x == 1.0);
        CHECK(remark2_bounds(0.5, 1e-9, 100).rho_y == doctest::Approx(1.0));
        const Remark2Bounds zero = remark2_bounds(0.3, 0.5, 0);
        CHECK(zero.rho_x == 1.0);
        CHECK(zero.rho_y == 1.0);
        const Remark2Bounds skew = remark2_bounds(0.2, 0.5, 10);
        CHECK(skew.rho_x == doctest::Approx(std::pow(1.0 - 0.01, 5)));
        CHECK(skew.rho_y == doctest::Approx(std::pow(1.0 - 0.16, 5)));
        CHECK_THROWS_AS(remark2_bounds(0.5, 3.0, 10), InvalidInput);
        CHECK_THROWS_AS(remark2_bounds(1.5, 0.1, 10), InvalidInput);
    }
}

TEST_SUITE("estimators")
{
    TEST_CASE("report arithmetic")
    {
        const SeparabilityReport r = SeparabilityReport::from_counts(30, 40, 0.5);
        CHECK(r.empirical_frequency == 0.75);
        CHECK(r.standard_error == doctest::Approx(std::sqrt(0.75 * 0.25 / 40.0)));
        CHECK(r.dominates_bound());
        CHECK(SeparabilityReport::from_counts(0, 10, 0.0).vacuous);
    }

    TEST_CASE("theorem 1 against a direct trial loop")
    {
        const BoundParams p = params(1, 1, 8, 40);
        const std::uint64_t trials = 300;
        const SeparabilityReport r = estimate_theorem1(p, trials, 77);
        // Replay the same substreams with the naive predicate.
        std::uint64_t naive = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            std::mt19937_64 rng = substream(77, t);
            RowMatrix sample(p.M, p.n);
            fill_unit_ball(sample, rng);
            RowMatrix query(1, p.n);
            fill_unit_ball(query, rng);
            naive += separable_naive(query.row(0).transpose(), sample) ? 1 : 0;
        }
        CHECK(r.successes == naive);
        CHECK(r.trials == trials);
    }

    TEST_CASE("theorem 1 bound dominance and edge cases")
    {
        const SeparabilityReport big = estimate_theorem1(params(1, 1, 20, 200), 2000, 1);
        CHECK(big.dominates_bound());
        const SeparabilityReport one_point = estimate_theorem1(params(1, 1, 5, 1), 4000, 2);
        CHECK(one_point.theoretical_bound == doctest::Approx(1.0 - std::pow(2.0, -5)));
        CHECK(one_point.dominates_bound());
        const SeparabilityReport low = estimate_theorem1(params(1, 1, 1, 1000), 500, 3);
        CHECK(low.vacuous);
        CHECK(low.empirical_frequency < 0.1);
        CHECK(low.trials == 500);
    }

    TEST_CASE("worker count does not change the result")
    {
        const BoundParams p = params(1, 1, 10, 50);
        const SeparabilityReport a = estimate_theorem1(p, 777, 5, 1);
        const SeparabilityReport b = estimate_theorem1(p, 777, 5, 3);
        CHECK(a.successes == b.successes);
        CHECK(check_dichotomy(12, 30, 500, 8, {}, 1).successes == check_dichotomy(12, 30, 500, 8, {}, 4).successes);
    }

    TEST_CASE("theorem 3 dominance")
    {
        for (const double y : {0.3, 1.0 / std::sqrt(2.0), 0.95}) {
            const Theorem3Reports r = estimate_theorem3(y, params(1, 1, 30, 100), 1500, 4);
            CHECK(r.point_from_set.dominates_bound());
            CHECK(r.set_from_point.dominates_bound());
        }
    }

    TEST_CASE("dichotomy outcomes")
    {
        // |y| > 1/sqrt 2 with y not separable from the sample: a failure by definition.
        Vector y(2);
        y << 0.8, 0.0;
        RowMatrix sample(1, 2);
        sample << 0.9, 0.0;
        const DichotomyOutcome o = dichotomy_outcome(y, sample);
        CHECK_FALSE(o.point_separable);
        CHECK_FALSE(o.inside_half_ball);
        CHECK_FALSE(o.holds());
        // Same geometry inside the half ball: every sample point separates from y.
        y << 0.5, 0.0;
        const DichotomyOutcome inside = dichotomy_outcome(y, sample);
        CHECK_FALSE(inside.point_separable);
        CHECK(inside.set_separable);
        CHECK(inside.holds());

        // Failure set is exactly "not alt 1 and (not alt 2 or outside the half ball)".
        std::mt19937_64 rng(12);
        for (int t = 0; t < 500; ++t) {
            const RowMatrix s = sample_unit_ball(3, 6, 100 + static_cast<std::uint64_t>(t));
            const Vector q = sample_unit_ball(3, 1, 900 + static_cast<std::uint64_t>(t)).row(0).transpose();
            const DichotomyOutcome d = dichotomy_outcome(q, s);
            const bool failure = !d.point_separable && (!d.set_separable || q.squaredNorm() > 0.5);
            CHECK(d.holds() == !failure);
            CHECK(d.point_separable == separable_naive(q, s));
        }
    }

    TEST_CASE("dichotomy with tiny and custom inputs")
    {
        const SeparabilityReport tiny = check_dichotomy(2, 1, 400, 13);
        CHECK(tiny.empirical_frequency >= 0.0);
        CHECK(tiny.empirical_frequency <= 1.0);
        CHECK(tiny.theoretical_bound == doctest::Approx(0.5));
        const PointSampler outer = [](Index n, std::mt19937_64&) {
            Vector v = Vector::Zero(n);
            v(0) = 1.0;
            return v;
        };
        // A point on the sphere is separable from every sample inside the open ball.
        CHECK(check_dichotomy(6, 20, 200, 14, outer).empirical_frequency == 1.0);
        CHECK(check_dichotomy(15, 100, 2000, 15).dominates_bound());
    }

    TEST_CASE("remark 2 estimates")
    {
        const Remark2Estimate e = estimate_remark2(0.5, 0.1, 200, 4000, 20);
        CHECK(e.within_bounds());
        const Remark2Estimate far = estimate_remark2(0.5, 1.0, 100, 2000, 21);
        CHECK(far.missed_x < 0.01);
        CHECK(far.leaked_y < 0.01);
        const Remark2Estimate single = estimate_remark2(0.5, 0.1, 10, 1, 22);
        CHECK(single.count == 1);
        CHECK((single.missed_x == 0.0 || single.missed_x == 1.0));
        CHECK(single.missed_x_se == 0.0);
    }

    TEST_CASE("remark 2 agrees with an explicit hyperplane replay")
    {
        const double kappa = 0.3;
        const double eps = 0.4;
        const Index n = 20;
        const Index count = 500;
        const Remark2Estimate e = estimate_remark2(kappa, eps, n, count, 23);
        std::mt19937_64 xr = substream(23, 0);
        std::mt19937_64 yr = substream(23, 1);
        RowMatrix point(1, n);
        int missed = 0;
        int leaked = 0;
        for (Index i = 0; i < count; ++i) {
            fill_unit_ball(point, xr);
            // h(x) = (x, w) + kappa eps with w = -ybar/eps and ybar = eps e_1.
            missed += -point(0, 0) + kappa * eps <= 0.0 ? 1 : 0;
            fill_unit_ball(point, yr);
            leaked += -(point(0, 0) + eps) + kappa * eps > 0.0 ? 1 : 0;
        }
        CHECK(e.missed_x == static_cast<double>(missed) / count);
        CHECK(e.leaked_y == static_cast<double>(leaked) / count);
    }

    TEST_CASE("theorem 2 deterministic coefficients")
    {
        RowMatrix z = RowMatrix::Identity(2, 2);
        RowMatrix sample(2, 2);
        sample << 0.5, 0.0, 0.0, 0.5;
        const CoefficientSampler good = [](std::mt19937_64&) { return Vector::Ones(2); };
        const Theorem2Estimate g = estimate_theorem2(good, z, sample, 50, 1);
        CHECK(g.report.empirical_frequency == 1.0);
        CHECK(g.failure_mass == 0.0);
        CHECK(g.report.theoretical_bound == 1.0);

        const CoefficientSampler bad = [](std::mt19937_64&) {
            Vector a(2);
            a << 0.2, 0.0;
            return a;
        };
        const Theorem2Estimate b = estimate_theorem2(bad, z, sample, 50, 1);
        CHECK(b.report.empirical_frequency == 0.0);
        CHECK(b.report.theoretical_bound <= 0.0);
        CHECK(b.point_failure[0] == 1.0);
        CHECK(b.point_failure[1] == 0.0);
    }

    TEST_CASE("theorem 2 one-dimensional analytic region")
    {
        RowMatrix z(1, 1);
        z << 1.0;
        RowMatrix sample(1, 1);
        sample << 0.5;
        const CoefficientSampler uniform12 = [](std::mt19937_64& rng) {
            Vector a(1);
            a(0) = std::uniform_real_distribution<double>(1.0, 2.0)(rng);
            return a;
        };
        // H = a^2 - 0.5 a > 0 for every a in [1, 2].
        const Theorem2Estimate e = estimate_theorem2(uniform12, z, sample, 1000, 2);
        CHECK(e.report.empirical_frequency == 1.0);
        CHECK(e.failure_mass == 0.0);

        // a ~ U[0, 1] fails exactly when a <= 0.5.
        const CoefficientSampler uniform01 = [](std::mt19937_64& rng) {
            Vector a(1);
            a(0) = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            return a;
        };
        const Theorem2Estimate half = estimate_theorem2(uniform01, z, sample, 20000, 3);
        CHECK(std::abs(half.failure_mass - 0.5) < 3.0 * std::sqrt(0.25 / 20000.0));
        CHECK(half.report.dominates_bound());
    }

    TEST_CASE("theorem 2 dimension mismatch")
    {
        const CoefficientSampler s = [](std::mt19937_64&) { return Vector::Ones(2); };
        CHECK_THROWS_AS(estimate_theorem2(s, RowMatrix::Identity(2, 3), RowMatrix::Zero(4, 2), 10, 1), InvalidInput);
        CHECK_THROWS_AS(estimate_theorem2(s, RowMatrix::Identity(3, 3), RowMatrix::Zero(4, 3), 10, 1), InvalidInput);
    }

    TEST_CASE("seeded reports are reproducible")
    {
        const BoundParams p = params(1, 1, 9, 30);
        const SeparabilityReport a = estimate_theorem1(p, 400, 99);
        const SeparabilityReport b = estimate_theorem1(p, 400, 99);
        CHECK(a.successes == b.successes);
        CHECK(a.standard_error == b.standard_error);
        const Remark2Estimate c = estimate_remark2(0.5, 0.2, 30, 300, 5);
        const Remark2Estimate d = estimate_remark2(0.5, 0.2, 30, 300, 5);
        CHECK(c.missed_x == d.missed_x);
    }
}
