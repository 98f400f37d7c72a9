#pragma once

#include <optional>
#include <string>

#include "sfw/lasso.hpp"
#include "sfw/linear_operator.hpp"
#include "sfw/rank_one.hpp"
#include "sfw/tensor.hpp"

namespace sfw {

struct SfwConfig {
    double lambda = 0.0;
    int max_outer_iters = 50;
    /// Certificate slack relative to lambda (absolute when lambda == 0).
    double dual_tol = 1e-4;
    int slide_iters = 20;
    double prune_tol = 1e-9;
    /// Atoms whose rank-one tensors have |cosine| >= 1 - merge_tol are merged.
    double merge_tol = 1e-8;
    double lasso_tol = 1e-10;
    RankOneConfig rank_one_cfg;

    void validate() const;
};

enum class StopReason { DualCertificate, MaxIters, EmptyAtSelection };

std::string to_string(StopReason r);
StopReason stop_reason_from_string(const std::string &s);

struct SfwResult {
    DiscreteMeasure measure;
    /// Objective after each recorded step (coefficient update and sliding of
    /// every outer iteration, plus the warm-start refit when present).
    Vector objective_trace;
    StopReason stop_reason = StopReason::MaxIters;
    std::size_t estimated_rank = 0;
    /// Best atom correlation with the final residual, as found by the
    /// rank-one solver (0 when the residual vanished).
    double certificate = 0.0;
    int outer_iterations = 0;
};

/// Sliding Frank-Wolfe for min 1/2 ||y - A mu||^2 + lambda ||mu||_TV over
/// discrete measures of unit rank-one atoms. `warm_start`, if given, is refit
/// at the current lambda before the first selection step.
SfwResult sfw_solve(const Vector &y, const LinearOperator &op, const SfwConfig &cfg,
                    const std::optional<DiscreteMeasure> &warm_start = std::nullopt);

/// Seed used by the rank-one solver at the given outer iteration.
std::uint64_t selection_seed(const SfwConfig &cfg, int iteration);

/// Largest atom correlation with A*y, computed exactly as the first selection
/// step of sfw_solve does. Any lambda at or above it yields the empty measure.
double lambda_max(const Vector &y, const LinearOperator &op, const SfwConfig &cfg);

/// Block-coordinate refinement of all atoms and coefficients. Each sweep
/// updates every factor of every atom by least squares against the residual
/// that excludes the atom, then refits the coefficients with one Lasso solve.
/// Sweeps stop early once the objective would increase; the returned measure
/// never has a larger objective than `mu`.
DiscreteMeasure slide(const Vector &y, const LinearOperator &op, const DiscreteMeasure &mu, double lambda,
                      int slide_iters, const LassoOptions &lasso = {});

/// Drops |c_l| <= prune_tol, then folds each atom into the first earlier atom
/// whose rank-one tensor has |cosine| >= 1 - merge_tol (with the matching sign).
DiscreteMeasure prune_and_merge(const DiscreteMeasure &mu, double prune_tol, double merge_tol);

} // namespace sfw
