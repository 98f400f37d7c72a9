#pragma once

#include "sfw/matrix.hpp"
#include "sfw/tensor.hpp"

namespace sfw {

/// Thin SVD, k = min(rows, cols) triples.
struct SvdFactors {
    Matrix u;
    Vector singular_values; // non-increasing
    Matrix v;

    Matrix reconstruct() const;
};

/// One-sided (Hestenes) Jacobi SVD. Sweeps pairs (p, q), p < q, in order until
/// every column pair satisfies |a_p . a_q| <= tol * ||a_p|| ||a_q||.
SvdFactors svd(const Matrix &m, double tol = 1e-12, int max_sweeps = 100);

/// argmin_X 1/2 ||M - X||_F^2 + lambda ||X||_*, by soft-thresholding singular values.
Matrix nuclear_prox(const Matrix &m, double lambda);

double nuclear_norm(const Matrix &m);

/// The thresholded singular triples as a discrete measure over rank-one atoms.
DiscreteMeasure nuclear_prox_measure(const Matrix &m, double lambda);

/// Order-2 tensors and column-major matrices share the same flat layout.
Matrix as_matrix(const DenseTensor &t);
DenseTensor as_tensor(const Matrix &m);

} // namespace sfw
