#include "sfw/matrix_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sfw/errors.hpp"

namespace sfw {

namespace {

double column_dot(const Matrix &a, std::size_t p, std::size_t q) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        s += a(i, p) * a(i, q);
    return s;
}

void rotate_columns(Matrix &a, std::size_t p, std::size_t q, double c, double s) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double ap = a(i, p);
        const double aq = a(i, q);
        a(i, p) = c * ap - s * aq;
        a(i, q) = s * ap + c * aq;
    }
}

// Fills column j of u with a unit vector orthogonal to columns [0, j).
void complete_column(Matrix &u, std::size_t j) {
    const std::size_t m = u.rows();
    for (std::size_t e = 0; e < m; ++e) {
        Vector x(m, 0.0);
        x[e] = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < j; ++k) {
                double d = 0.0;
                for (std::size_t i = 0; i < m; ++i)
                    d += u(i, k) * x[i];
                for (std::size_t i = 0; i < m; ++i)
                    x[i] -= d * u(i, k);
            }
        const double n = norm2(x);
        if (n > 0.5) {
            for (std::size_t i = 0; i < m; ++i)
                u(i, j) = x[i] / n;
            return;
        }
    }
}

SvdFactors svd_tall(const Matrix &m, double tol, int max_sweeps) {
    const std::size_t n = m.cols();
    Matrix a = m;
    Matrix v = Matrix::identity(n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = column_dot(a, p, p);
                const double beta = column_dot(a, q, q);
                const double gamma = column_dot(a, p, q);
                if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta))
                    continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate_columns(a, p, q, c, s);
                rotate_columns(v, p, q, c, s);
            }
        if (!rotated)
            break;
    }

    Vector sigma(n);
    for (std::size_t j = 0; j < n; ++j)
        sigma[j] = std::sqrt(column_dot(a, j, j));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return sigma[x] > sigma[y]; });

    SvdFactors out{Matrix(m.rows(), n), Vector(n), Matrix(n, n)};
    const double smax = n == 0 ? 0.0 : sigma[order.front()];
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.singular_values[j] = sigma[src];
        for (std::size_t i = 0; i < n; ++i)
            out.v(i, j) = v(i, src);
        if (sigma[src] > 1e-14 * smax && sigma[src] > 0.0) {
            for (std::size_t i = 0; i < m.rows(); ++i)
                out.u(i, j) = a(i, src) / sigma[src];
        } else {
            complete_column(out.u, j);
        }
    }
    return out;
}

} // namespace

Matrix SvdFactors::reconstruct() const {
    Matrix us = u;
    for (std::size_t j = 0; j < singular_values.size(); ++j)
        for (std::size_t i = 0; i < us.rows(); ++i)
            us(i, j) *= singular_values[j];
    return us * v.transpose();
}

SvdFactors svd(const Matrix &m, double tol, int max_sweeps) {
    for (double x : m.data())
        if (!std::isfinite(x))
            throw NumericalError("svd: non-finite matrix entry");
    if (m.rows() >= m.cols())
        return svd_tall(m, tol, max_sweeps);
    SvdFactors t = svd_tall(m.transpose(), tol, max_sweeps);
    std::swap(t.u, t.v);
    return t;
}

Matrix nuclear_prox(const Matrix &m, double lambda) {
    if (!(lambda >= 0.0))
        throw std::invalid_argument("nuclear_prox: lambda must be nonnegative");
    SvdFactors f = svd(m);
    for (auto &s : f.singular_values)
        s = std::max(s - lambda, 0.0);
    return f.reconstruct();
}

double nuclear_norm(const Matrix &m) {
    const SvdFactors f = svd(m);
    return std::accumulate(f.singular_values.begin(), f.singular_values.end(), 0.0);
}

DiscreteMeasure nuclear_prox_measure(const Matrix &m, double lambda) {
    if (!(lambda >= 0.0))
        throw std::invalid_argument("nuclear_prox_measure: lambda must be nonnegative");
    const SvdFactors f = svd(m);
    DiscreteMeasure mu;
    for (std::size_t j = 0; j < f.singular_values.size(); ++j) {
        const double c = f.singular_values[j] - lambda;
        if (c <= 0.0)
            break;
        mu.push_back(c, Atom({f.u.column(j), f.v.column(j)}));
    }
    return mu;
}

Matrix as_matrix(const DenseTensor &t) {
    if (t.order() != 2)
        throw ShapeError("as_matrix: tensor is not of order 2");
    Matrix m(t.extent(0), t.extent(1));
    m.data() = t.data();
    return m;
}

DenseTensor as_tensor(const Matrix &m) { return DenseTensor({m.rows(), m.cols()}, m.data()); }

} // namespace sfw
