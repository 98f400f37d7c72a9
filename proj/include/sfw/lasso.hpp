#pragma once

#include <vector>

#include "sfw/linear_operator.hpp"
#include "sfw/tensor.hpp"

namespace sfw {

/// min_c 1/2 ||y - D c||^2 + lambda ||c||_1 with D given by columns.
struct LassoProblem {
    std::vector<Vector> columns;
    Vector target;
    double lambda = 0.0;

    std::size_t num_atoms() const noexcept { return columns.size(); }
    double objective(const Vector &c) const;
    /// Worst violation of the optimality conditions at `c`.
    double kkt_residual(const Vector &c) const;

    /// Columns apply(A, rank_one(atom_l)) for the atoms of `mu`.
    static LassoProblem from_measure(const DiscreteMeasure &mu, const LinearOperator &op, Vector target,
                                     double lambda);
};

struct LassoOptions {
    double tol = 1e-10;
    int max_sweeps = 200000;
};

/// Cyclic coordinate descent with exact soft-threshold updates on the Gram
/// system, started from `warm_start` (zeros if empty). Stops once the KKT
/// residual is at most `tol`, or when a full sweep leaves every coordinate
/// bit-identical.
Vector solve_lasso(const LassoProblem &p, const Vector &warm_start, const LassoOptions &opts = {});

double soft_threshold(double x, double lambda) noexcept;

/// 1/2 ||y - A evaluate(mu)||^2 + lambda * sum |c_l|.
double blasso_objective(const Vector &y, const DiscreteMeasure &mu, const LinearOperator &op, double lambda);

} // namespace sfw
