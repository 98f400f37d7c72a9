#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sfw/tensor.hpp"

namespace sfw {

/// Observation map A from tensors of a fixed shape to R^m, with adjoint.
///
/// Two kinds exist. Vectorization returns the flat data (m = number of
/// entries). Mask keeps a list of flat canonical indices, in the order given.
/// Both have a diagonal A*A in the canonical basis, which the sliding step
/// relies on through `gram_diagonal`.
class LinearOperator {
public:
    enum class Kind { Vectorization, Mask };

    static LinearOperator vectorization(Shape domain);
    /// Throws if an index is out of range or repeated.
    static LinearOperator mask(Shape domain, std::vector<std::size_t> indices);
    /// Mask observing round(fraction * N) distinct entries drawn from `seed`,
    /// returned in increasing index order.
    static LinearOperator random_mask(Shape domain, double fraction, std::uint64_t seed);

    Kind kind() const noexcept { return kind_; }
    const Shape &domain_shape() const noexcept { return domain_; }
    std::size_t codomain_dim() const noexcept;
    const std::vector<std::size_t> &indices() const noexcept { return indices_; }

    Vector apply(const DenseTensor &x) const;
    DenseTensor adjoint(const Vector &r) const;

    /// Diagonal of A*A as a tensor: all ones, or the 0/1 observation pattern.
    DenseTensor gram_diagonal() const;

private:
    LinearOperator(Kind kind, Shape domain, std::vector<std::size_t> indices)
        : kind_(kind), domain_(std::move(domain)), indices_(std::move(indices)) {}

    Kind kind_;
    Shape domain_;
    std::vector<std::size_t> indices_;
};

} // namespace sfw
