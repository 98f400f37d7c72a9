#include "sfw/sfw.hpp"

#include <cmath>
#include <stdexcept>

#include "sfw/errors.hpp"
#include "sfw/random.hpp"

namespace sfw {

void SfwConfig::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be finite and nonnegative");
    if (max_outer_iters < 0)
        throw std::invalid_argument("max_outer_iters must be nonnegative");
    if (slide_iters < 0)
        throw std::invalid_argument("slide_iters must be nonnegative");
    if (!(dual_tol > 0.0) || !(prune_tol > 0.0) || !(merge_tol > 0.0) || !(lasso_tol > 0.0))
        throw std::invalid_argument("SFW tolerances must be positive");
    rank_one_cfg.validate();
}

std::string to_string(StopReason r) {
    switch (r) {
    case StopReason::DualCertificate:
        return "dual_certificate";
    case StopReason::MaxIters:
        return "max_iters";
    case StopReason::EmptyAtSelection:
        return "empty_at_selection";
    }
    return "unknown";
}

StopReason stop_reason_from_string(const std::string &s) {
    if (s == "dual_certificate")
        return StopReason::DualCertificate;
    if (s == "max_iters")
        return StopReason::MaxIters;
    if (s == "empty_at_selection")
        return StopReason::EmptyAtSelection;
    throw std::invalid_argument("unknown stop reason '" + s + "'");
}

namespace {

bool all_zero(const DenseTensor &t) {
    for (double x : t.data())
        if (x != 0.0)
            return false;
    return true;
}

void hadamard_in_place(DenseTensor &t, const DenseTensor &w) {
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] *= w[i];
}

Vector residual(const Vector &y, const LinearOperator &op, const DiscreteMeasure &mu) {
    Vector r = y;
    const Vector model = op.apply(evaluate(mu, op.domain_shape()));
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] -= model[i];
    return r;
}

void refit_coefficients(const Vector &y, const LinearOperator &op, DiscreteMeasure &mu, double lambda,
                        const LassoOptions &opts) {
    auto p = LassoProblem::from_measure(mu, op, y, lambda);
    mu.coefficients = solve_lasso(p, mu.coefficients, opts);
}

// Prune and merge, then refit. Merging is kept unless its cost exceeds `ceiling`,
// the last recorded objective; otherwise only pruning is applied.
DiscreteMeasure tidy(const Vector &y, const LinearOperator &op, const DiscreteMeasure &mu, const SfwConfig &cfg,
                     const LassoOptions &opts, double ceiling) {
    DiscreteMeasure merged = prune_and_merge(mu, cfg.prune_tol, cfg.merge_tol);
    DiscreteMeasure pruned = prune_and_merge(mu, cfg.prune_tol, 0.0);
    if (merged.size() == pruned.size())
        return pruned;
    refit_coefficients(y, op, merged, cfg.lambda, opts);
    merged = prune_and_merge(merged, cfg.prune_tol, 0.0);
    const double merged_obj = blasso_objective(y, merged, op, cfg.lambda);
    if (merged_obj <= ceiling || merged_obj <= blasso_objective(y, pruned, op, cfg.lambda))
        return merged;
    return pruned;
}

} // namespace

DiscreteMeasure prune_and_merge(const DiscreteMeasure &mu, double prune_tol, double merge_tol) {
    if (mu.coefficients.size() != mu.atoms.size())
        throw ShapeError("prune_and_merge: coefficient/atom count mismatch");
    DiscreteMeasure out;
    for (std::size_t l = 0; l < mu.size(); ++l) {
        const double c = mu.coefficients[l];
        if (std::abs(c) <= prune_tol)
            continue;
        bool merged = false;
        for (std::size_t k = 0; k < out.size(); ++k) {
            const double cosine = atom_inner(mu.atoms[l], out.atoms[k]);
            if (std::abs(cosine) >= 1.0 - merge_tol) {
                out.coefficients[k] += cosine < 0.0 ? -c : c;
                merged = true;
                break;
            }
        }
        if (!merged)
            out.push_back(c, mu.atoms[l]);
    }
    if (out.size() == mu.size())
        return out;
    DiscreteMeasure kept;
    for (std::size_t k = 0; k < out.size(); ++k)
        if (std::abs(out.coefficients[k]) > prune_tol)
            kept.push_back(out.coefficients[k], std::move(out.atoms[k]));
    return kept;
}

DiscreteMeasure slide(const Vector &y, const LinearOperator &op, const DiscreteMeasure &mu, double lambda,
                      int slide_iters, const LassoOptions &lasso) {
    if (mu.empty() || slide_iters <= 0)
        return mu;
    const Shape &shape = op.domain_shape();
    const bool weighted = op.kind() != LinearOperator::Kind::Vectorization;
    const DenseTensor weights = op.gram_diagonal();
    const DenseTensor aty = op.adjoint(y);

    DiscreteMeasure best = mu;
    double best_obj = blasso_objective(y, mu, op, lambda);

    for (int sweep = 0; sweep < slide_iters; ++sweep) {
        std::vector<std::vector<Vector>> factors;
        factors.reserve(best.size());
        for (const auto &a : best.atoms)
            factors.push_back(a.factors());
        Vector coefs = best.coefficients;

        // Domain residual A*(y - A x).
        DenseTensor model = evaluate(best, shape);
        if (weighted)
            hadamard_in_place(model, weights);
        DenseTensor res = aty - model;

        for (std::size_t l = 0; l < factors.size(); ++l) {
            const double c = coefs[l];
            if (c == 0.0)
                continue;
            auto &fl = factors[l];
            DenseTensor own = rank_one(std::span<const Vector>(fl));
            if (weighted)
                hadamard_in_place(own, weights);
            DenseTensor target = res;
            target.axpy(c, own);

            for (std::size_t mode = 0; mode < fl.size(); ++mode) {
                Vector w = contract_all_but(target, std::span<const Vector>(fl), mode);
                if (weighted) {
                    std::vector<Vector> squares = fl;
                    for (auto &u : squares)
                        for (auto &x : u)
                            x *= x;
                    const Vector den = contract_all_but(weights, std::span<const Vector>(squares), mode);
                    for (std::size_t j = 0; j < w.size(); ++j)
                        w[j] = den[j] > 0.0 ? w[j] / den[j] : c * fl[mode][j];
                }
                const double nw = norm2(w);
                if (!std::isfinite(nw))
                    throw NumericalError("slide: non-finite factor update");
                if (nw == 0.0)
                    continue;
                const double s = (c < 0.0 ? -1.0 : 1.0) / nw;
                for (auto &x : w)
                    x *= s;
                fl[mode] = std::move(w);
            }

            own = rank_one(std::span<const Vector>(fl));
            if (weighted)
                hadamard_in_place(own, weights);
            res = std::move(target);
            res.axpy(-c, own);
        }

        DiscreteMeasure trial;
        for (std::size_t l = 0; l < factors.size(); ++l) {
            auto canon = Atom::canonicalize(std::move(factors[l]));
            trial.push_back(coefs[l] * canon.scale, std::move(canon.atom));
        }
        refit_coefficients(y, op, trial, lambda, lasso);
        const double obj = blasso_objective(y, trial, op, lambda);
        if (!(obj < best_obj))
            break;
        best = std::move(trial);
        best_obj = obj;
    }
    return best;
}

std::uint64_t selection_seed(const SfwConfig &cfg, int iteration) {
    return splitmix64(cfg.rank_one_cfg.rng_seed ^ static_cast<std::uint64_t>(iteration));
}

double lambda_max(const Vector &y, const LinearOperator &op, const SfwConfig &cfg) {
    const DenseTensor grad = op.adjoint(y);
    if (all_zero(grad))
        return 0.0;
    RankOneConfig rcfg = cfg.rank_one_cfg;
    rcfg.rng_seed = selection_seed(cfg, 0);
    return best_rank_one(grad, rcfg).correlation;
}

SfwResult sfw_solve(const Vector &y, const LinearOperator &op, const SfwConfig &cfg,
                    const std::optional<DiscreteMeasure> &warm_start) {
    cfg.validate();
    if (y.size() != op.codomain_dim())
        throw ShapeError("sfw_solve: observation length differs from operator codomain");
    for (double v : y)
        if (!std::isfinite(v))
            throw NumericalError("sfw_solve: non-finite observation");

    const LassoOptions lasso{cfg.lasso_tol};
    const double lambda = cfg.lambda;
    const double threshold = lambda > 0.0 ? lambda * (1.0 + cfg.dual_tol) : cfg.dual_tol;

    SfwResult out;
    DiscreteMeasure mu;
    if (warm_start && !warm_start->empty()) {
        for (const auto &a : warm_start->atoms)
            if (a.shape() != op.domain_shape())
                throw ShapeError("sfw_solve: warm-start atom shape differs from operator domain");
        mu = *warm_start;
        refit_coefficients(y, op, mu, lambda, lasso);
        mu = tidy(y, op, mu, cfg, lasso, blasso_objective(y, mu, op, lambda));
        out.objective_trace.push_back(blasso_objective(y, mu, op, lambda));
    }

    auto selection = [&](int iteration, const Vector &r) -> std::optional<RankOneResult> {
        const DenseTensor grad = op.adjoint(r);
        if (all_zero(grad))
            return std::nullopt;
        RankOneConfig rcfg = cfg.rank_one_cfg;
        rcfg.rng_seed = selection_seed(cfg, iteration);
        return best_rank_one(grad, rcfg);
    };

    out.stop_reason = StopReason::MaxIters;
    bool stopped = false;
    for (int it = 0; it < cfg.max_outer_iters; ++it) {
        const Vector r = residual(y, op, mu);
        auto cand = selection(it, r);
        if (!cand) {
            out.stop_reason = StopReason::EmptyAtSelection;
            out.certificate = 0.0;
            stopped = true;
            break;
        }
        out.certificate = cand->correlation;
        if (cand->correlation <= threshold) {
            out.stop_reason = StopReason::DualCertificate;
            stopped = true;
            break;
        }

        bool duplicate = false;
        for (const auto &a : mu.atoms)
            if (std::abs(atom_inner(a, cand->atom)) >= 1.0 - cfg.merge_tol) {
                duplicate = true;
                break;
            }
        if (!duplicate) {
            const Vector d = op.apply(rank_one(cand->atom));
            const double dd = dot(d, d);
            const double step = dd > 0.0 ? soft_threshold(dot(d, r), lambda) / dd : 0.0;
            mu.push_back(step, std::move(cand->atom));
        }
        refit_coefficients(y, op, mu, lambda, lasso);
        mu = prune_and_merge(mu, cfg.prune_tol, 0.0);
        out.objective_trace.push_back(blasso_objective(y, mu, op, lambda));

        mu = slide(y, op, mu, lambda, cfg.slide_iters, lasso);
        mu = tidy(y, op, mu, cfg, lasso, out.objective_trace.back());
        out.objective_trace.push_back(blasso_objective(y, mu, op, lambda));
        out.outer_iterations = it + 1;
    }
    if (!stopped) {
        // Report the certificate of the final iterate, not the last selection.
        auto cand = selection(cfg.max_outer_iters, residual(y, op, mu));
        out.certificate = cand ? cand->correlation : 0.0;
    }

    for (double c : mu.coefficients)
        if (!std::isfinite(c))
            throw NumericalError("sfw_solve: non-finite coefficient");
    out.estimated_rank = mu.size();
    out.measure = std::move(mu);
    return out;
}

} // namespace sfw
