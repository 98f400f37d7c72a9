#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sfw/errors.hpp"
#include "sfw/experiment.hpp"
#include "sfw/matrix_baseline.hpp"
#include "sfw/sfw.hpp"

using namespace sfw;

namespace {

Vector basis(std::size_t n, std::size_t i) {
    Vector e(n, 0.0);
    e[i] = 1.0;
    return e;
}

DiscreteMeasure random_measure(const Shape &shape, std::size_t s, std::uint64_t seed) {
    Rng rng(seed, Stream::Testing, 11);
    DiscreteMeasure mu;
    for (std::size_t l = 0; l < s; ++l) {
        std::vector<Vector> f;
        for (auto n : shape)
            f.push_back(rng.normal_vector(n));
        mu.push_back(0.5 + std::abs(rng.normal()), Atom(f));
    }
    return mu;
}

void expect_non_increasing(const Vector &trace, double slack) {
    for (std::size_t k = 1; k < trace.size(); ++k)
        EXPECT_LE(trace[k], trace[k - 1] + slack) << "step " << k;
}

void expect_canonical(const DiscreteMeasure &mu) {
    for (const auto &a : mu.atoms) {
        for (const auto &u : a.factors())
            EXPECT_NEAR(norm2(u), 1.0, 1e-12);
        const auto &u0 = a.factor(0);
        std::size_t arg = 0;
        for (std::size_t i = 1; i < u0.size(); ++i)
            if (std::abs(u0[i]) > std::abs(u0[arg]))
                arg = i;
        EXPECT_GE(u0[arg], 0.0);
    }
}

} // namespace

TEST(SfwSolve, SingleAtomSoftThreshold) {
    const Shape shape{3, 3, 3};
    const auto op = LinearOperator::vectorization(shape);
    const Vector y = op.apply(2.0 * rank_one(std::vector<Vector>{basis(3, 0), basis(3, 0), basis(3, 0)}));
    SfwConfig cfg;
    cfg.lambda = 0.5;
    const auto r = sfw_solve(y, op, cfg);
    ASSERT_EQ(r.estimated_rank, 1u);
    EXPECT_NEAR(r.measure.coefficients[0], 1.5, 1e-12);
    for (std::size_t k = 0; k < 3; ++k)
        EXPECT_NEAR(std::abs(r.measure.atoms[0].factor(k)[0]), 1.0, 1e-12);
    EXPECT_EQ(r.stop_reason, StopReason::DualCertificate);
    EXPECT_LE(r.certificate, cfg.lambda * (1 + cfg.dual_tol));
}

TEST(SfwSolve, LambdaAboveLambdaMaxGivesEmptyMeasure) {
    const Shape shape{4, 3, 5};
    const auto op = LinearOperator::vectorization(shape);
    const Vector y = op.apply(evaluate(random_measure(shape, 2, 1), shape));
    SfwConfig cfg;
    const double lmax = lambda_max(y, op, cfg);
    EXPECT_NEAR(lmax, spectral_norm(op.adjoint(y), cfg.rank_one_cfg), 1e-9 * lmax);
    for (double factor : {1.0, 1.3}) {
        cfg.lambda = factor * lmax;
        const auto r = sfw_solve(y, op, cfg);
        EXPECT_TRUE(r.measure.empty());
        EXPECT_EQ(r.stop_reason, StopReason::DualCertificate);
        EXPECT_EQ(r.outer_iterations, 0);
    }
}

TEST(SfwSolve, ZeroObservationStopsAtSelection) {
    const auto op = LinearOperator::vectorization({2, 3});
    SfwConfig cfg;
    cfg.lambda = 0.1;
    const auto r = sfw_solve(Vector(6, 0.0), op, cfg);
    EXPECT_EQ(r.stop_reason, StopReason::EmptyAtSelection);
    EXPECT_TRUE(r.measure.empty());
}

TEST(SfwSolve, MatrixCaseMatchesSoftThresholding) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        ExperimentSpec spec;
        spec.shape = {10, 12};
        spec.true_rank = 3;
        spec.noise_sigma = 0.01;
        spec.seed = seed;
        const auto data = generate(spec);
        const auto op = LinearOperator::vectorization(spec.shape);
        const Vector y = op.apply(data.observed);
        SfwConfig cfg;
        cfg.rank_one_cfg.rng_seed = seed;
        const double lmax = lambda_max(y, op, cfg);
        for (double ratio : {0.1, 0.3, 0.6}) {
            cfg.lambda = ratio * lmax;
            const auto r = sfw_solve(y, op, cfg);
            const Matrix prox = nuclear_prox(as_matrix(data.observed), cfg.lambda);
            const DenseTensor est = evaluate(r.measure, spec.shape);
            EXPECT_LE(oracle::rel_diff(est, as_tensor(prox)), 1e-4) << "seed " << seed << " ratio " << ratio;
            expect_non_increasing(r.objective_trace, 1e-10);
            expect_canonical(r.measure);
        }
    }
}

TEST(SfwSolve, ObjectiveTraceNonIncreasingOnRandomTensors) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Shape shape{4, 5, 3};
        const auto op = seed % 2 ? LinearOperator::random_mask(shape, 0.7, seed) : LinearOperator::vectorization(shape);
        DenseTensor x = evaluate(random_measure(shape, 3, seed), shape);
        x += 0.05 * oracle::random_tensor(shape, seed);
        const Vector y = op.apply(x);
        SfwConfig cfg;
        cfg.max_outer_iters = 8;
        cfg.lambda = 0.1 * lambda_max(y, op, cfg);
        const auto r = sfw_solve(y, op, cfg);
        ASSERT_FALSE(r.objective_trace.empty());
        expect_non_increasing(r.objective_trace, 1e-10);
        expect_canonical(r.measure);
        EXPECT_LT(r.objective_trace.back(), 0.5 * dot(y, y));
        EXPECT_NEAR(r.objective_trace.back(), blasso_objective(y, r.measure, op, cfg.lambda), 1e-12);
    }
}

TEST(SfwSolve, CertificateHoldsAtStop) {
    const Shape shape{5, 4, 6};
    const auto op = LinearOperator::vectorization(shape);
    DenseTensor x = evaluate(random_measure(shape, 2, 4), shape);
    x += 0.01 * oracle::random_tensor(shape, 4);
    const Vector y = op.apply(x);
    SfwConfig cfg;
    cfg.lambda = 0.2 * lambda_max(y, op, cfg);
    const auto r = sfw_solve(y, op, cfg);
    ASSERT_EQ(r.stop_reason, StopReason::DualCertificate);
    EXPECT_LE(r.certificate, cfg.lambda * (1 + cfg.dual_tol));
    Vector res = y;
    const Vector model = op.apply(evaluate(r.measure, shape));
    for (std::size_t i = 0; i < res.size(); ++i)
        res[i] -= model[i];
    // An independent, more thorough rank-one search on the final residual.
    RankOneConfig thorough;
    thorough.num_random_restarts = 40;
    thorough.rng_seed = 999;
    EXPECT_LE(spectral_norm(op.adjoint(res), thorough), cfg.lambda * (1 + cfg.dual_tol) * (1 + 1e-6));
}

TEST(SfwSolve, RecoversNoiselessLowRankTensor) {
    const Shape shape{6, 7, 5};
    const auto op = LinearOperator::vectorization(shape);
    const auto truth = random_measure(shape, 2, 21);
    const Vector y = op.apply(evaluate(truth, shape));
    SfwConfig cfg;
    cfg.lambda = 1e-3;
    const auto r = sfw_solve(y, op, cfg);
    EXPECT_EQ(r.estimated_rank, 2u);
    const DenseTensor est = evaluate(r.measure, shape);
    EXPECT_LT(oracle::rel_diff(est, evaluate(truth, shape)), 1e-2);
}

TEST(SfwSolve, ZeroLambdaRunsToIterationLimitOrExactFit) {
    const Shape shape{3, 3, 3};
    const auto op = LinearOperator::vectorization(shape);
    const Vector y = op.apply(oracle::random_tensor(shape, 3));
    SfwConfig cfg;
    cfg.lambda = 0.0;
    cfg.max_outer_iters = 4;
    const auto r = sfw_solve(y, op, cfg);
    EXPECT_EQ(r.stop_reason, StopReason::MaxIters);
    EXPECT_EQ(r.outer_iterations, 4);
    EXPECT_GT(r.certificate, 0.0);
    expect_non_increasing(r.objective_trace, 1e-10);
}

TEST(SfwSolve, WarmStartIsRefitFirst) {
    const Shape shape{4, 4, 4};
    const auto op = LinearOperator::vectorization(shape);
    const auto truth = random_measure(shape, 2, 5);
    const Vector y = op.apply(evaluate(truth, shape));
    SfwConfig cfg;
    cfg.lambda = 0.05;
    const auto cold = sfw_solve(y, op, cfg);
    const auto warm = sfw_solve(y, op, cfg, cold.measure);
    EXPECT_EQ(warm.estimated_rank, cold.estimated_rank);
    EXPECT_LE(warm.objective_trace.back(), cold.objective_trace.back() + 1e-12);
    EXPECT_LE(warm.outer_iterations, 1);
}

TEST(SfwSolve, SeededDeterminism) {
    const Shape shape{4, 5, 3};
    const auto op = LinearOperator::vectorization(shape);
    DenseTensor x = evaluate(random_measure(shape, 3, 2), shape);
    x += 0.02 * oracle::random_tensor(shape, 2);
    const Vector y = op.apply(x);
    SfwConfig cfg;
    cfg.lambda = 0.05;
    cfg.rank_one_cfg.rng_seed = 17;
    const auto a = sfw_solve(y, op, cfg);
    const auto b = sfw_solve(y, op, cfg);
    EXPECT_EQ(a.measure, b.measure);
    EXPECT_EQ(a.objective_trace, b.objective_trace);
}

TEST(SfwSolve, InvalidConfigAndShapes) {
    const auto op = LinearOperator::vectorization({2, 2});
    SfwConfig cfg;
    cfg.lambda = -1.0;
    EXPECT_THROW(sfw_solve(Vector(4, 1.0), op, cfg), std::invalid_argument);
    cfg.lambda = 0.1;
    cfg.dual_tol = 0.0;
    EXPECT_THROW(sfw_solve(Vector(4, 1.0), op, cfg), std::invalid_argument);
    cfg.dual_tol = 1e-4;
    EXPECT_THROW(sfw_solve(Vector(3, 1.0), op, cfg), ShapeError);
}

TEST(Slide, FixedPointIsUnchanged) {
    const Shape shape{3, 4, 2};
    const auto op = LinearOperator::vectorization(shape);
    DiscreteMeasure mu;
    mu.push_back(2.0, Atom({basis(3, 1), basis(4, 0), basis(2, 1)}));
    const Vector y = op.apply(evaluate(mu, shape));
    DiscreteMeasure shrunk = mu;
    shrunk.coefficients[0] = 2.0 - 0.1; // lasso solution for lambda = 0.1
    const auto out = slide(y, op, shrunk, 0.1, 20);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_NEAR(out.coefficients[0], 1.9, 1e-12);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < shape[k]; ++i)
            EXPECT_NEAR(out.atoms[0].factor(k)[i], shrunk.atoms[0].factor(k)[i], 1e-12);
}

TEST(Slide, NeverIncreasesObjective) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Shape shape{3 + seed % 3, 4, 3};
        const auto op = seed % 3 == 0 ? LinearOperator::random_mask(shape, 0.6, seed) : LinearOperator::vectorization(shape);
        const Vector y = op.apply(oracle::random_tensor(shape, seed));
        const auto mu = random_measure(shape, 1 + seed % 4, seed);
        const double lambda = 0.1 * static_cast<double>(seed % 5);
        const auto out = slide(y, op, mu, lambda, 5);
        EXPECT_LE(blasso_objective(y, out, op, lambda), blasso_objective(y, mu, op, lambda)) << "seed " << seed;
    }
}

TEST(Slide, SingleAtomWithoutRegularizationIsAls) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Shape shape{4, 5, 3};
        const auto op = LinearOperator::vectorization(shape);
        const DenseTensor t = oracle::random_tensor(shape, 60 + seed);
        RankOneConfig cfg;
        cfg.tol = 1e-14;
        cfg.max_als_iters = 5000;
        const auto best = best_rank_one(t, cfg);
        // Start near the optimum so both routes settle on the same maximizer.
        std::vector<Vector> f = best.atom.factors();
        Rng rng(seed, Stream::Testing);
        for (auto &u : f)
            for (auto &x : u)
                x += 0.05 * rng.normal();
        DiscreteMeasure mu;
        mu.push_back(1.0, Atom(f));
        const auto out = slide(op.apply(t), op, mu, 0.0, 2000);
        ASSERT_EQ(out.size(), 1u);
        EXPECT_NEAR(std::abs(out.coefficients[0]), best.correlation, 1e-8 * best.correlation);
        EXPECT_NEAR(std::abs(atom_inner(out.atoms[0], best.atom)), 1.0, 1e-8);
    }
}

TEST(Slide, EmptyMeasurePassesThrough) {
    const auto op = LinearOperator::vectorization({2, 2});
    EXPECT_TRUE(slide(Vector(4, 1.0), op, {}, 0.1, 5).empty());
}

TEST(PruneAndMerge, DropsTinyCoefficients) {
    DiscreteMeasure mu;
    mu.push_back(1.0, Atom({basis(2, 0), basis(2, 0)}));
    mu.push_back(1e-12, Atom({basis(2, 1), basis(2, 1)}));
    const auto out = prune_and_merge(mu, 1e-9, 1e-8);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out.coefficients[0], 1.0);
}

TEST(PruneAndMerge, MergesDuplicatesOntoFirst) {
    DiscreteMeasure mu;
    const Atom a({{1, 2}, {3, 1}, {0, 1}});
    mu.push_back(1.0, a);
    mu.push_back(2.0, a);
    const auto out = prune_and_merge(mu, 1e-9, 1e-8);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out.coefficients[0], 3.0);
    EXPECT_EQ(out.atoms[0], a);
}

TEST(PruneAndMerge, MergesNegatedAtomWithFlippedCoefficient) {
    DiscreteMeasure mu;
    mu.push_back(1.0, Atom({{1, 2}, {3, 1}}));
    mu.push_back(0.25, Atom({{1, 2}, {-3, -1}}));
    const auto out = prune_and_merge(mu, 1e-9, 1e-8);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_DOUBLE_EQ(out.coefficients[0], 0.75);
}

TEST(PruneAndMerge, DistinctAtomsUnchanged) {
    const auto mu = random_measure({5, 4, 6}, 4, 3);
    EXPECT_EQ(prune_and_merge(mu, 1e-9, 1e-8), mu);
}

TEST(StopReason, StringRoundTrip) {
    for (auto r : {StopReason::DualCertificate, StopReason::MaxIters, StopReason::EmptyAtSelection})
        EXPECT_EQ(stop_reason_from_string(to_string(r)), r);
    EXPECT_THROW(stop_reason_from_string("bogus"), std::invalid_argument);
}
