#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sfw/matrix.hpp"

namespace sfw {

using Shape = std::vector<std::size_t>;

std::size_t num_elements(const Shape &shape);

/// Dense t-way array, first index fastest in the flat storage.
class DenseTensor {
public:
    DenseTensor() = default;
    /// Zero tensor of the given shape. Throws on empty shape or zero extent.
    explicit DenseTensor(Shape shape);
    DenseTensor(Shape shape, Vector data);

    const Shape &shape() const noexcept { return shape_; }
    std::size_t order() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return data_.size(); }
    std::size_t extent(std::size_t mode) const { return shape_.at(mode); }

    const Vector &data() const noexcept { return data_; }
    Vector &data() noexcept { return data_; }
    double operator[](std::size_t flat) const noexcept { return data_[flat]; }
    double &operator[](std::size_t flat) noexcept { return data_[flat]; }

    double at(std::span<const std::size_t> index) const;
    std::size_t flat_index(std::span<const std::size_t> index) const;

    DenseTensor &operator+=(const DenseTensor &other);
    DenseTensor &operator-=(const DenseTensor &other);
    DenseTensor &operator*=(double alpha);
    /// this += alpha * other
    void axpy(double alpha, const DenseTensor &other);

    friend bool operator==(const DenseTensor &, const DenseTensor &) = default;

private:
    Shape shape_;
    Vector data_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor &b);
DenseTensor operator-(DenseTensor a, const DenseTensor &b);
DenseTensor operator*(double alpha, DenseTensor a);

/// Element of the parameter set: one unit vector per mode.
///
/// Construction normalizes each factor and canonicalizes signs: for every
/// factor except the last, the first entry of largest magnitude is made
/// nonnegative, and the last factor absorbs the accumulated sign, so the
/// rank-one tensor itself is unchanged for t >= 2. When t == 1 the sign cannot
/// be absorbed and is reported through `Atom::canonicalize`.
class Atom {
public:
    Atom() = default;
    /// Normalizes and canonicalizes; discards the overall scale.
    explicit Atom(std::vector<Vector> factors);

    struct Scaled;
    /// Returns the canonical atom together with the scalar `s` such that
    /// rank_one(factors) == s * rank_one(atom).
    static Scaled canonicalize(std::vector<Vector> factors);

    const std::vector<Vector> &factors() const noexcept { return factors_; }
    const Vector &factor(std::size_t mode) const { return factors_.at(mode); }
    std::size_t order() const noexcept { return factors_.size(); }
    Shape shape() const;

    friend bool operator==(const Atom &, const Atom &) = default;

private:
    std::vector<Vector> factors_;
};

struct Atom::Scaled {
    double scale;
    Atom atom;
};

/// Finitely supported measure over atoms: a CP model sum_l c_l * atom_l.
struct DiscreteMeasure {
    Vector coefficients;
    std::vector<Atom> atoms;

    std::size_t size() const noexcept { return atoms.size(); }
    bool empty() const noexcept { return atoms.empty(); }
    void push_back(double c, Atom a);
    /// Sum of |c_l|, the total-variation norm of the measure.
    double tv_norm() const;

    friend bool operator==(const DiscreteMeasure &, const DiscreteMeasure &) = default;
};

/// Outer product u1 ⊗ ... ⊗ ut.
DenseTensor rank_one(std::span<const Vector> factors);
DenseTensor rank_one(const Atom &atom);

/// Mode-`mode` matricization, n_mode rows. Columns enumerate the remaining
/// indices in canonical order (lowest remaining mode fastest).
Matrix unfold(const DenseTensor &t, std::size_t mode);
DenseTensor fold(const Matrix &m, std::size_t mode, const Shape &shape);

/// sum_l c_l * rank_one(atom_l); the zero tensor of `shape` when empty.
DenseTensor evaluate(const DiscreteMeasure &mu, const Shape &shape);

double inner(const DenseTensor &a, const DenseTensor &b);
double frob_norm(const DenseTensor &t);

/// Contracts `t` with every factor except the one at `mode`.
Vector contract_all_but(const DenseTensor &t, std::span<const Vector> factors, std::size_t mode);
Vector contract_all_but(const DenseTensor &t, const Atom &atom, std::size_t mode);

/// <rank_one(a), rank_one(b)> computed factorwise.
double atom_inner(const Atom &a, const Atom &b);

} // namespace sfw
