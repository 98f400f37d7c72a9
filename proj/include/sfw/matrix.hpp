#pragma once

#include <cstddef>
#include <vector>

namespace sfw {

using Vector = std::vector<double>;

/// Dense column-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    /// Builds from row-major nested lists, convenient for literals in tests.
    static Matrix from_rows(const std::vector<Vector> &rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double &operator()(std::size_t i, std::size_t j) noexcept { return data_[i + j * rows_]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i + j * rows_]; }

    const Vector &data() const noexcept { return data_; }
    Vector &data() noexcept { return data_; }

    Vector column(std::size_t j) const;
    void set_column(std::size_t j, const Vector &v);
    Matrix transpose() const;

    friend bool operator==(const Matrix &, const Matrix &) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

Matrix operator*(const Matrix &a, const Matrix &b);
Matrix operator-(const Matrix &a, const Matrix &b);
Vector operator*(const Matrix &a, const Vector &x);
double frobenius_norm(const Matrix &m);

double dot(const Vector &a, const Vector &b);
double norm2(const Vector &a);

} // namespace sfw
