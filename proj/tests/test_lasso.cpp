#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sfw/errors.hpp"
#include "sfw/lasso.hpp"

using namespace sfw;

namespace {

LassoProblem random_problem(std::size_t m, std::size_t s, double lambda_scale, std::uint64_t seed) {
    Rng rng(seed, Stream::Testing);
    LassoProblem p;
    for (std::size_t j = 0; j < s; ++j)
        p.columns.push_back(oracle::random_unit(m, rng));
    p.target = rng.normal_vector(m);
    double corr_max = 0.0;
    for (const auto &c : p.columns)
        corr_max = std::max(corr_max, std::abs(dot(c, p.target)));
    p.lambda = lambda_scale * corr_max;
    return p;
}

} // namespace

TEST(SoftThreshold, Values) {
    EXPECT_EQ(soft_threshold(3.0, 1.0), 2.0);
    EXPECT_EQ(soft_threshold(-3.0, 1.0), -2.0);
    EXPECT_EQ(soft_threshold(0.5, 1.0), 0.0);
}

TEST(SolveLasso, SingleUnitColumnIsSoftThreshold) {
    LassoProblem p;
    p.columns = {{0.6, 0.8}};
    p.target = {1.8, 2.4}; // <d, y> = 3
    p.lambda = 1.0;
    const Vector c = solve_lasso(p, {});
    ASSERT_EQ(c.size(), 1u);
    EXPECT_NEAR(c[0], 2.0, 1e-14);
    EXPECT_LE(p.kkt_residual(c), 1e-10);
}

TEST(SolveLasso, LambdaAboveMaxGivesZero) {
    auto p = random_problem(10, 4, 1.0, 3);
    const Vector c = solve_lasso(p, {});
    for (double x : c)
        EXPECT_EQ(x, 0.0);
    p.lambda *= 1.5;
    const Vector warm{0.3, -0.2, 0.1, 0.5};
    for (double x : solve_lasso(p, warm))
        EXPECT_EQ(x, 0.0);
}

TEST(SolveLasso, EmptyDictionary) {
    LassoProblem p;
    p.target = {1, 2, 3};
    p.lambda = 0.1;
    EXPECT_TRUE(solve_lasso(p, {}).empty());
}

TEST(SolveLasso, MatchesProximalGradientOracle) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto p = random_problem(10, 4, 0.2 + 0.05 * static_cast<double>(seed), 40 + seed);
        const Vector c = solve_lasso(p, {});
        EXPECT_LE(p.kkt_residual(c), 1e-10);
        const Vector ref = oracle::ista_lasso(p.columns, p.target, p.lambda, 100000);
        const double f = oracle::lasso_objective(p.columns, p.target, p.lambda, c);
        const double fref = oracle::lasso_objective(p.columns, p.target, p.lambda, ref);
        EXPECT_NEAR(f, fref, 1e-6) << "seed " << seed;
        EXPECT_LE(f, fref + 1e-12);
    }
}

TEST(SolveLasso, KktAndMonotoneFromWarmStart) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto p = random_problem(12, 6, 0.1, 200 + seed);
        Rng rng(seed, Stream::Testing, 9);
        const Vector warm = rng.normal_vector(6);
        const Vector c = solve_lasso(p, warm);
        EXPECT_LE(p.kkt_residual(c), 1e-10) << "seed " << seed;
        EXPECT_LE(p.objective(c), p.objective(warm));
    }
}

TEST(SolveLasso, CorrelatedColumnsStillMeetTolerance) {
    Rng rng(5, Stream::Testing);
    LassoProblem p;
    const Vector base = oracle::random_unit(15, rng);
    for (int j = 0; j < 5; ++j) {
        Vector v = base;
        const Vector noise = rng.normal_vector(15);
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] += 0.05 * noise[i];
        const double n = norm2(v);
        for (auto &x : v)
            x /= n;
        p.columns.push_back(v);
    }
    p.target = rng.normal_vector(15);
    p.lambda = 0.05;
    const Vector c = solve_lasso(p, {});
    EXPECT_LE(p.kkt_residual(c), 1e-10);
}

TEST(SolveLasso, RejectsBadInput) {
    auto p = random_problem(5, 2, 0.5, 1);
    EXPECT_THROW(solve_lasso(p, {1.0}), ShapeError);
    EXPECT_THROW(solve_lasso(p, {}, {0.0}), std::invalid_argument);
}

TEST(BlassoObjective, EmptyMeasureIsHalfSquaredNorm) {
    const auto op = LinearOperator::vectorization({2, 3});
    const Vector y{1, 2, 3, 4, 5, 6};
    EXPECT_DOUBLE_EQ(blasso_objective(y, {}, op, 0.7), 0.5 * 91.0);
}

TEST(BlassoObjective, NoiselessZeroLambda) {
    Rng rng(2, Stream::Testing);
    DiscreteMeasure mu;
    for (int l = 0; l < 3; ++l)
        mu.push_back(rng.normal(), Atom({rng.normal_vector(3), rng.normal_vector(4), rng.normal_vector(2)}));
    const auto op = LinearOperator::vectorization({3, 4, 2});
    const Vector y = op.apply(evaluate(mu, {3, 4, 2}));
    EXPECT_NEAR(blasso_objective(y, mu, op, 0.0), 0.0, 1e-28);
}

TEST(BlassoObjective, MatchesRecomputation) {
    Rng rng(8, Stream::Testing);
    DiscreteMeasure mu;
    std::vector<std::vector<Vector>> raw;
    for (int l = 0; l < 3; ++l) {
        std::vector<Vector> f{oracle::random_unit(3, rng), oracle::random_unit(2, rng), oracle::random_unit(4, rng)};
        raw.push_back(f);
        mu.push_back(rng.normal(), Atom(f));
    }
    const auto op = LinearOperator::random_mask({3, 2, 4}, 0.6, 3);
    const double lambda = 0.3;
    DenseTensor truth = oracle::random_tensor({3, 2, 4}, 8);
    const Vector y = op.apply(truth);

    DenseTensor model({3, 2, 4});
    for (int l = 0; l < 3; ++l) {
        const DenseTensor r = oracle::rank_one(raw[l]);
        for (std::size_t i = 0; i < r.size(); ++i)
            model[i] += mu.coefficients[l] * r[i];
    }
    double sq = 0.0;
    for (std::size_t k = 0; k < op.indices().size(); ++k) {
        const double d = y[k] - model[op.indices()[k]];
        sq += d * d;
    }
    const double expect =
        0.5 * sq + lambda * (std::abs(mu.coefficients[0]) + std::abs(mu.coefficients[1]) + std::abs(mu.coefficients[2]));
    EXPECT_NEAR(blasso_objective(y, mu, op, lambda), expect, 1e-12 * expect);
}

TEST(BlassoObjective, LengthMismatchThrows) {
    const auto op = LinearOperator::vectorization({2, 2});
    EXPECT_THROW(blasso_objective(Vector(3), {}, op, 0.1), ShapeError);
}
