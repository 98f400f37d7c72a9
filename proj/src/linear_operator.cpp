#include "sfw/linear_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sfw/errors.hpp"
#include "sfw/random.hpp"

namespace sfw {

LinearOperator LinearOperator::vectorization(Shape domain) {
    DenseTensor probe(domain); // validates the shape
    return LinearOperator(Kind::Vectorization, std::move(domain), {});
}

LinearOperator LinearOperator::mask(Shape domain, std::vector<std::size_t> indices) {
    const std::size_t n = DenseTensor(domain).size();
    std::vector<bool> seen(n, false);
    for (auto idx : indices) {
        if (idx >= n)
            throw std::invalid_argument("mask index " + std::to_string(idx) + " out of range for " +
                                        std::to_string(n) + " entries");
        if (seen[idx])
            throw std::invalid_argument("mask index " + std::to_string(idx) + " repeated");
        seen[idx] = true;
    }
    return LinearOperator(Kind::Mask, std::move(domain), std::move(indices));
}

LinearOperator LinearOperator::random_mask(Shape domain, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("mask fraction must lie in (0, 1]");
    const std::size_t n = DenseTensor(domain).size();
    const auto keep = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed, Stream::Mask);
    // Partial Fisher-Yates; only the first `keep` slots are needed.
    for (std::size_t i = 0; i < keep; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(perm[i], perm[j]);
    }
    perm.resize(keep);
    std::sort(perm.begin(), perm.end());
    return mask(std::move(domain), std::move(perm));
}

std::size_t LinearOperator::codomain_dim() const noexcept {
    return kind_ == Kind::Vectorization ? num_elements(domain_) : indices_.size();
}

Vector LinearOperator::apply(const DenseTensor &x) const {
    if (x.shape() != domain_)
        throw ShapeError("LinearOperator::apply: tensor shape differs from operator domain");
    if (kind_ == Kind::Vectorization)
        return x.data();
    Vector y(indices_.size());
    for (std::size_t k = 0; k < indices_.size(); ++k)
        y[k] = x[indices_[k]];
    return y;
}

DenseTensor LinearOperator::adjoint(const Vector &r) const {
    if (r.size() != codomain_dim())
        throw ShapeError("LinearOperator::adjoint: vector length " + std::to_string(r.size()) +
                         " differs from codomain dimension " + std::to_string(codomain_dim()));
    if (kind_ == Kind::Vectorization)
        return DenseTensor(domain_, r);
    DenseTensor x(domain_);
    for (std::size_t k = 0; k < indices_.size(); ++k)
        x[indices_[k]] = r[k];
    return x;
}

DenseTensor LinearOperator::gram_diagonal() const {
    if (kind_ == Kind::Vectorization)
        return DenseTensor(domain_, Vector(num_elements(domain_), 1.0));
    DenseTensor w(domain_);
    for (auto idx : indices_)
        w[idx] = 1.0;
    return w;
}

} // namespace sfw
