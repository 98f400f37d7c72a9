#include "sfw/matrix.hpp"

#include <cmath>

#include "sfw/errors.hpp"

namespace sfw {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vector> &rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c)
            throw ShapeError("Matrix::from_rows: ragged rows");
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

Vector Matrix::column(std::size_t j) const {
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(j * rows_),
                  data_.begin() + static_cast<std::ptrdiff_t>((j + 1) * rows_));
}

void Matrix::set_column(std::size_t j, const Vector &v) {
    if (v.size() != rows_)
        throw ShapeError("Matrix::set_column: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i)
        (*this)(i, j) = v[i];
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i)
            t(j, i) = (*this)(i, j);
    return t;
}

Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.cols() != b.rows())
        throw ShapeError("matrix product: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double bkj = b(k, j);
            for (std::size_t i = 0; i < a.rows(); ++i)
                c(i, j) += a(i, k) * bkj;
        }
    return c;
}

Matrix operator-(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError("matrix difference: shapes differ");
    Matrix c = a;
    for (std::size_t i = 0; i < c.data().size(); ++i)
        c.data()[i] -= b.data()[i];
    return c;
}

Vector operator*(const Matrix &a, const Vector &x) {
    if (a.cols() != x.size())
        throw ShapeError("matrix-vector product: length mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i)
            y[i] += a(i, j) * x[j];
    return y;
}

double frobenius_norm(const Matrix &m) { return norm2(m.data()); }

double dot(const Vector &a, const Vector &b) {
    if (a.size() != b.size())
        throw ShapeError("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm2(const Vector &a) {
    double s = 0.0;
    for (double x : a)
        s += x * x;
    return std::sqrt(s);
}

} // namespace sfw
