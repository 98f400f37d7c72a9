#pragma once

#include <cstdint>
#include <string>

#include "sfw/tensor.hpp"

namespace sfw {

struct RankOneConfig {
    int num_random_restarts = 10;
    bool use_hosvd_init = true;
    int max_als_iters = 200;
    /// Relative change of the correlation between sweeps that ends ALS.
    double tol = 1e-10;
    std::uint64_t rng_seed = 0;

    /// Throws std::invalid_argument when the fields are inconsistent.
    void validate() const;
};

struct InitLabel {
    enum class Kind { Hosvd, Random, Given };
    Kind kind = Kind::Given;
    std::uint64_t seed = 0;
    int index = 0;

    std::string to_string() const;
};

struct RankOneResult {
    Atom atom;
    /// |<T, rank_one(atom)>|; equals the signed value whenever t >= 2.
    double correlation = 0.0;
    int iterations = 0;
    InitLabel init;
    /// Correlation before the first sweep followed by the value after each sweep.
    Vector trace;
    /// Set when a contraction vanished and ALS kept the previous factor.
    bool degenerate = false;
};

/// Alternating least squares for max <T, u1 ⊗ ... ⊗ ut> over unit vectors.
RankOneResult als_from(const DenseTensor &t, const Atom &init, const RankOneConfig &cfg);

/// Dominant left singular vector of every unfolding. Throws DegenerateInput on
/// the zero tensor.
Atom hosvd_init(const DenseTensor &t);

/// Dominant unit eigenvector of a symmetric positive semidefinite matrix by
/// power iteration from a seeded Gaussian start.
Vector dominant_eigenvector(const Matrix &gram, std::uint64_t seed, double tol = 1e-12, int max_iters = 100000);

/// Best of ALS runs from the HOSVD atom (if enabled) and
/// `num_random_restarts` Gaussian starts. Ties keep the earliest start.
RankOneResult best_rank_one(const DenseTensor &t, const RankOneConfig &cfg);

/// Largest correlation of `t` with a unit rank-one tensor, as found by
/// best_rank_one.
double spectral_norm(const DenseTensor &t, const RankOneConfig &cfg);

} // namespace sfw
