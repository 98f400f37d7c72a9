#include "sfw/tensor.hpp"

#include <cmath>
#include <string>

#include "sfw/errors.hpp"

namespace sfw {

namespace {

void check_shape(const Shape &shape) {
    if (shape.empty())
        throw ShapeError("tensor shape must have at least one mode");
    for (auto n : shape)
        if (n == 0)
            throw ShapeError("tensor extents must be positive");
}

void require_same_shape(const DenseTensor &a, const DenseTensor &b, const char *what) {
    if (a.shape() != b.shape())
        throw ShapeError(std::string(what) + ": shape mismatch");
}

// Kronecker-style flat product with the first factor fastest.
Vector flat_outer(std::span<const Vector> factors) {
    Vector out{1.0};
    for (const auto &u : factors) {
        Vector next(out.size() * u.size());
        for (std::size_t j = 0; j < u.size(); ++j)
            for (std::size_t i = 0; i < out.size(); ++i)
                next[i + out.size() * j] = out[i] * u[j];
        out = std::move(next);
    }
    return out;
}

std::size_t product(const Shape &shape, std::size_t begin, std::size_t end) {
    std::size_t p = 1;
    for (std::size_t k = begin; k < end; ++k)
        p *= shape[k];
    return p;
}

} // namespace

std::size_t num_elements(const Shape &shape) { return product(shape, 0, shape.size()); }

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)) {
    check_shape(shape_);
    data_.assign(num_elements(shape_), 0.0);
}

DenseTensor::DenseTensor(Shape shape, Vector data) : shape_(std::move(shape)), data_(std::move(data)) {
    check_shape(shape_);
    if (data_.size() != num_elements(shape_))
        throw ShapeError("tensor data length " + std::to_string(data_.size()) + " does not match shape (" +
                         std::to_string(num_elements(shape_)) + " entries)");
}

std::size_t DenseTensor::flat_index(std::span<const std::size_t> index) const {
    if (index.size() != shape_.size())
        throw ShapeError("tensor index has wrong arity");
    std::size_t flat = 0;
    std::size_t stride = 1;
    for (std::size_t k = 0; k < index.size(); ++k) {
        if (index[k] >= shape_[k])
            throw std::out_of_range("tensor index out of range");
        flat += index[k] * stride;
        stride *= shape_[k];
    }
    return flat;
}

double DenseTensor::at(std::span<const std::size_t> index) const { return data_[flat_index(index)]; }

DenseTensor &DenseTensor::operator+=(const DenseTensor &other) {
    axpy(1.0, other);
    return *this;
}

DenseTensor &DenseTensor::operator-=(const DenseTensor &other) {
    axpy(-1.0, other);
    return *this;
}

DenseTensor &DenseTensor::operator*=(double alpha) {
    for (auto &x : data_)
        x *= alpha;
    return *this;
}

void DenseTensor::axpy(double alpha, const DenseTensor &other) {
    require_same_shape(*this, other, "axpy");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += alpha * other.data_[i];
}

DenseTensor operator+(DenseTensor a, const DenseTensor &b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor &b) { return a -= b; }
DenseTensor operator*(double alpha, DenseTensor a) { return a *= alpha; }

Atom::Atom(std::vector<Vector> factors) : factors_(canonicalize(std::move(factors)).atom.factors_) {}

Atom::Scaled Atom::canonicalize(std::vector<Vector> factors) {
    if (factors.empty())
        throw ShapeError("atom needs at least one factor");
    double scale = 1.0;
    for (auto &u : factors) {
        if (u.empty())
            throw ShapeError("atom factor must be nonempty");
        const double n = norm2(u);
        if (!(n > 0.0) || !std::isfinite(n))
            throw DegenerateInput("atom factor has zero or non-finite norm");
        // Already-unit factors are kept bit-for-bit so canonicalization is idempotent.
        if (std::abs(n - 1.0) > 0x1.0p-50) {
            for (auto &x : u)
                x /= n;
            scale *= n;
        }
    }
    const std::size_t t = factors.size();
    const std::size_t sign_modes = t == 1 ? 1 : t - 1;
    for (std::size_t k = 0; k < sign_modes; ++k) {
        auto &u = factors[k];
        std::size_t arg = 0;
        for (std::size_t i = 1; i < u.size(); ++i)
            if (std::abs(u[i]) > std::abs(u[arg]))
                arg = i;
        if (u[arg] < 0.0) {
            for (auto &x : u)
                x = -x;
            if (t == 1) {
                scale = -scale;
            } else {
                for (auto &x : factors.back())
                    x = -x;
            }
        }
    }
    Scaled out{scale, Atom{}};
    out.atom.factors_ = std::move(factors);
    return out;
}

Shape Atom::shape() const {
    Shape s;
    s.reserve(factors_.size());
    for (const auto &u : factors_)
        s.push_back(u.size());
    return s;
}

void DiscreteMeasure::push_back(double c, Atom a) {
    coefficients.push_back(c);
    atoms.push_back(std::move(a));
}

double DiscreteMeasure::tv_norm() const {
    double s = 0.0;
    for (double c : coefficients)
        s += std::abs(c);
    return s;
}

DenseTensor rank_one(std::span<const Vector> factors) {
    if (factors.empty())
        throw ShapeError("rank_one: no factors");
    Shape shape;
    for (const auto &u : factors)
        shape.push_back(u.size());
    return DenseTensor(std::move(shape), flat_outer(factors));
}

DenseTensor rank_one(const Atom &atom) { return rank_one(std::span<const Vector>(atom.factors())); }

Matrix unfold(const DenseTensor &t, std::size_t mode) {
    if (mode >= t.order())
        throw std::out_of_range("unfold: mode out of range");
    const auto &shape = t.shape();
    const std::size_t low = product(shape, 0, mode);
    const std::size_t n = shape[mode];
    const std::size_t high = product(shape, mode + 1, shape.size());
    Matrix m(n, low * high);
    for (std::size_t h = 0; h < high; ++h)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < low; ++l)
                m(j, l + low * h) = t[l + low * (j + n * h)];
    return m;
}

DenseTensor fold(const Matrix &m, std::size_t mode, const Shape &shape) {
    if (mode >= shape.size())
        throw std::out_of_range("fold: mode out of range");
    DenseTensor t(shape);
    const std::size_t low = product(shape, 0, mode);
    const std::size_t n = shape[mode];
    const std::size_t high = product(shape, mode + 1, shape.size());
    if (m.rows() != n || m.cols() != low * high)
        throw ShapeError("fold: matrix dimensions do not match shape");
    for (std::size_t h = 0; h < high; ++h)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < low; ++l)
                t[l + low * (j + n * h)] = m(j, l + low * h);
    return t;
}

DenseTensor evaluate(const DiscreteMeasure &mu, const Shape &shape) {
    if (mu.coefficients.size() != mu.atoms.size())
        throw ShapeError("evaluate: coefficient/atom count mismatch");
    DenseTensor out(shape);
    for (std::size_t l = 0; l < mu.size(); ++l) {
        if (mu.atoms[l].shape() != shape)
            throw ShapeError("evaluate: atom shape differs from target shape");
        out.axpy(mu.coefficients[l], rank_one(mu.atoms[l]));
    }
    return out;
}

double inner(const DenseTensor &a, const DenseTensor &b) {
    require_same_shape(a, b, "inner");
    return dot(a.data(), b.data());
}

double frob_norm(const DenseTensor &t) { return norm2(t.data()); }

Vector contract_all_but(const DenseTensor &t, std::span<const Vector> factors, std::size_t mode) {
    const auto &shape = t.shape();
    if (factors.size() != shape.size())
        throw ShapeError("contract_all_but: factor count differs from tensor order");
    for (std::size_t k = 0; k < shape.size(); ++k)
        if (factors[k].size() != shape[k])
            throw ShapeError("contract_all_but: factor length differs from tensor extent");
    if (mode >= shape.size())
        throw std::out_of_range("contract_all_but: mode out of range");

    const Vector w_low = flat_outer(factors.subspan(0, mode));
    const Vector w_high = flat_outer(factors.subspan(mode + 1));
    const std::size_t low = w_low.size();
    const std::size_t n = shape[mode];
    Vector out(n, 0.0);
    const auto &data = t.data();
    for (std::size_t h = 0; h < w_high.size(); ++h) {
        const double wh = w_high[h];
        for (std::size_t j = 0; j < n; ++j) {
            const double *slab = data.data() + low * (j + n * h);
            double s = 0.0;
            for (std::size_t l = 0; l < low; ++l)
                s += w_low[l] * slab[l];
            out[j] += wh * s;
        }
    }
    return out;
}

Vector contract_all_but(const DenseTensor &t, const Atom &atom, std::size_t mode) {
    return contract_all_but(t, std::span<const Vector>(atom.factors()), mode);
}

double atom_inner(const Atom &a, const Atom &b) {
    if (a.shape() != b.shape())
        throw ShapeError("atom_inner: shape mismatch");
    double p = 1.0;
    for (std::size_t k = 0; k < a.order(); ++k)
        p *= dot(a.factor(k), b.factor(k));
    return p;
}

} // namespace sfw
