#include "sfw/rank_one.hpp"

#include <cmath>
#include <stdexcept>

#include "sfw/errors.hpp"
#include "sfw/random.hpp"

namespace sfw {

void RankOneConfig::validate() const {
    if (num_random_restarts < 0)
        throw std::invalid_argument("num_random_restarts must be nonnegative");
    if (num_random_restarts == 0 && !use_hosvd_init)
        throw std::invalid_argument("rank-one solver needs at least one initialization");
    if (max_als_iters < 0)
        throw std::invalid_argument("max_als_iters must be nonnegative");
    if (!(tol > 0.0))
        throw std::invalid_argument("rank-one tolerance must be positive");
}

std::string InitLabel::to_string() const {
    switch (kind) {
    case Kind::Hosvd:
        return "hosvd";
    case Kind::Random:
        return "random(" + std::to_string(seed) + "," + std::to_string(index) + ")";
    case Kind::Given:
        break;
    }
    return "given";
}

namespace {

bool is_zero(const DenseTensor &t) {
    for (double x : t.data())
        if (x != 0.0)
            return false;
    return true;
}

} // namespace

RankOneResult als_from(const DenseTensor &t, const Atom &init, const RankOneConfig &cfg) {
    if (init.shape() != t.shape())
        throw ShapeError("als_from: initial atom shape differs from tensor shape");

    std::vector<Vector> factors = init.factors();
    const std::size_t order = factors.size();
    RankOneResult res;
    double corr = inner(t, rank_one(std::span<const Vector>(factors)));
    res.trace.push_back(corr);

    for (int it = 0; it < cfg.max_als_iters; ++it) {
        double last_norm = corr;
        for (std::size_t mode = 0; mode < order; ++mode) {
            Vector g = contract_all_but(t, std::span<const Vector>(factors), mode);
            const double n = norm2(g);
            if (!std::isfinite(n))
                throw NumericalError("als_from: non-finite contraction");
            if (n == 0.0) {
                res.degenerate = true;
                break;
            }
            for (auto &x : g)
                x /= n;
            factors[mode] = std::move(g);
            last_norm = n;
        }
        if (res.degenerate) {
            corr = inner(t, rank_one(std::span<const Vector>(factors)));
            res.trace.push_back(corr);
            res.iterations = it + 1;
            break;
        }
        // After the last mode update the correlation is the norm of that contraction.
        const double prev = corr;
        corr = last_norm;
        res.trace.push_back(corr);
        res.iterations = it + 1;
        if (std::abs(corr - prev) <= cfg.tol * std::abs(corr))
            break;
    }

    auto canon = Atom::canonicalize(std::move(factors));
    res.atom = std::move(canon.atom);
    res.correlation = std::abs(corr);
    return res;
}

Vector dominant_eigenvector(const Matrix &gram, std::uint64_t seed, double tol, int max_iters) {
    const std::size_t n = gram.rows();
    if (gram.cols() != n)
        throw ShapeError("dominant_eigenvector: matrix is not square");
    Rng rng(seed, Stream::PowerIteration);
    Vector v = rng.normal_vector(n);
    double nv = norm2(v);
    for (auto &x : v)
        x /= nv;
    for (int it = 0; it < max_iters; ++it) {
        Vector w = gram * v;
        const double nw = norm2(w);
        if (nw == 0.0)
            throw DegenerateInput("dominant_eigenvector: matrix annihilates the iterate");
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] /= nw;
            diff = std::max(diff, std::abs(w[i] - v[i]));
        }
        v = std::move(w);
        if (diff <= tol)
            break;
    }
    return v;
}

Atom hosvd_init(const DenseTensor &t) {
    if (is_zero(t))
        throw DegenerateInput("hosvd_init: zero tensor has no dominant direction");
    std::vector<Vector> factors;
    factors.reserve(t.order());
    for (std::size_t mode = 0; mode < t.order(); ++mode) {
        const Matrix m = unfold(t, mode);
        const std::size_t n = m.rows();
        Matrix gram(n, n);
        for (std::size_t c = 0; c < m.cols(); ++c)
            for (std::size_t j = 0; j < n; ++j) {
                const double mj = m(j, c);
                if (mj == 0.0)
                    continue;
                for (std::size_t i = 0; i < n; ++i)
                    gram(i, j) += m(i, c) * mj;
            }
        factors.push_back(dominant_eigenvector(gram, mode));
    }
    return Atom(std::move(factors));
}

RankOneResult best_rank_one(const DenseTensor &t, const RankOneConfig &cfg) {
    cfg.validate();
    if (is_zero(t))
        throw DegenerateInput("best_rank_one: zero tensor");

    RankOneResult best;
    bool have = false;
    auto consider = [&](RankOneResult r) {
        if (!have || r.correlation > best.correlation) {
            best = std::move(r);
            have = true;
        }
    };

    if (cfg.use_hosvd_init) {
        auto r = als_from(t, hosvd_init(t), cfg);
        r.init = {InitLabel::Kind::Hosvd, 0, 0};
        consider(std::move(r));
    }
    for (int k = 0; k < cfg.num_random_restarts; ++k) {
        Rng rng(cfg.rng_seed, Stream::AlsInit, static_cast<std::uint64_t>(k));
        std::vector<Vector> factors;
        for (auto n : t.shape())
            factors.push_back(rng.normal_vector(n));
        auto r = als_from(t, Atom(std::move(factors)), cfg);
        r.init = {InitLabel::Kind::Random, cfg.rng_seed, k};
        consider(std::move(r));
    }
    return best;
}

double spectral_norm(const DenseTensor &t, const RankOneConfig &cfg) { return best_rank_one(t, cfg).correlation; }

} // namespace sfw
