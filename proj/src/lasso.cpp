#include "sfw/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "sfw/errors.hpp"

namespace sfw {

namespace {

struct GramSystem {
    Matrix gram; // D^T D
    Vector rhs;  // D^T y
};

GramSystem build_gram(const LassoProblem &p) {
    const std::size_t s = p.num_atoms();
    GramSystem g{Matrix(s, s), Vector(s)};
    for (std::size_t j = 0; j < s; ++j) {
        g.rhs[j] = dot(p.columns[j], p.target);
        for (std::size_t i = 0; i <= j; ++i) {
            const double v = dot(p.columns[i], p.columns[j]);
            g.gram(i, j) = v;
            g.gram(j, i) = v;
        }
    }
    return g;
}

// r_j = D_j^T (y - D c)
Vector correlations(const GramSystem &g, const Vector &c) {
    Vector r = g.rhs;
    const std::size_t s = c.size();
    for (std::size_t k = 0; k < s; ++k) {
        if (c[k] == 0.0)
            continue;
        for (std::size_t j = 0; j < s; ++j)
            r[j] -= g.gram(j, k) * c[k];
    }
    return r;
}

double kkt_from_correlations(const Vector &r, const Vector &c, double lambda) {
    double worst = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double v = c[j] == 0.0 ? std::max(0.0, std::abs(r[j]) - lambda)
                                     : std::abs(r[j] - std::copysign(lambda, c[j]));
        worst = std::max(worst, v);
    }
    return worst;
}

} // namespace

double soft_threshold(double x, double lambda) noexcept {
    if (x > lambda)
        return x - lambda;
    if (x < -lambda)
        return x + lambda;
    return 0.0;
}

double LassoProblem::objective(const Vector &c) const {
    if (c.size() != columns.size())
        throw ShapeError("LassoProblem::objective: coefficient length mismatch");
    Vector r = target;
    double l1 = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        l1 += std::abs(c[j]);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] -= columns[j][i] * c[j];
    }
    const double n = norm2(r);
    return 0.5 * n * n + lambda * l1;
}

double LassoProblem::kkt_residual(const Vector &c) const {
    if (c.size() != columns.size())
        throw ShapeError("LassoProblem::kkt_residual: coefficient length mismatch");
    Vector r = target;
    for (std::size_t j = 0; j < c.size(); ++j)
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] -= columns[j][i] * c[j];
    Vector corr(c.size());
    for (std::size_t j = 0; j < c.size(); ++j)
        corr[j] = dot(columns[j], r);
    return kkt_from_correlations(corr, c, lambda);
}

LassoProblem LassoProblem::from_measure(const DiscreteMeasure &mu, const LinearOperator &op, Vector target,
                                        double lambda) {
    LassoProblem p;
    p.columns.reserve(mu.size());
    for (const auto &a : mu.atoms)
        p.columns.push_back(op.apply(rank_one(a)));
    p.target = std::move(target);
    p.lambda = lambda;
    return p;
}

Vector solve_lasso(const LassoProblem &p, const Vector &warm_start, const LassoOptions &opts) {
    const std::size_t s = p.num_atoms();
    if (!(opts.tol > 0.0))
        throw std::invalid_argument("solve_lasso: tolerance must be positive");
    if (!(p.lambda >= 0.0))
        throw std::invalid_argument("solve_lasso: lambda must be nonnegative");
    for (const auto &col : p.columns)
        if (col.size() != p.target.size())
            throw ShapeError("solve_lasso: column length differs from target length");
    if (s == 0)
        return {};
    Vector c = warm_start.empty() ? Vector(s, 0.0) : warm_start;
    if (c.size() != s)
        throw ShapeError("solve_lasso: warm start length differs from atom count");

    const GramSystem g = build_gram(p);
    Vector r = correlations(g, c);
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        if (kkt_from_correlations(r, c, p.lambda) <= opts.tol)
            break;
        bool moved = false;
        for (std::size_t j = 0; j < s; ++j) {
            const double gjj = g.gram(j, j);
            if (gjj <= 0.0) {
                // An unobservable atom carries no signal; zero is optimal for it.
                if (c[j] != 0.0) {
                    const double delta = -c[j];
                    c[j] = 0.0;
                    for (std::size_t i = 0; i < s; ++i)
                        r[i] -= g.gram(i, j) * delta;
                    moved = true;
                }
                continue;
            }
            const double next = soft_threshold(r[j] + gjj * c[j], p.lambda) / gjj;
            const double delta = next - c[j];
            if (delta == 0.0)
                continue;
            c[j] = next;
            for (std::size_t i = 0; i < s; ++i)
                r[i] -= g.gram(i, j) * delta;
            moved = true;
        }
        if (!moved)
            break;
        // Incremental updates drift; refresh periodically.
        if (sweep % 64 == 63)
            r = correlations(g, c);
    }
    for (double x : c)
        if (!std::isfinite(x))
            throw NumericalError("solve_lasso: non-finite coefficient");
    return c;
}

double blasso_objective(const Vector &y, const DiscreteMeasure &mu, const LinearOperator &op, double lambda) {
    if (y.size() != op.codomain_dim())
        throw ShapeError("blasso_objective: observation length differs from operator codomain");
    const Vector model = op.apply(evaluate(mu, op.domain_shape()));
    double sq = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - model[i];
        sq += d * d;
    }
    return 0.5 * sq + lambda * mu.tv_norm();
}

} // namespace sfw
