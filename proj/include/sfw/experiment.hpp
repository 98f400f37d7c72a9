#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sfw/linear_operator.hpp"
#include "sfw/sfw.hpp"
#include "sfw/tensor.hpp"

namespace sfw {

/// Synthetic low-rank-plus-noise problem.
struct ExperimentSpec {
    Shape shape{20, 21, 22};
    std::size_t true_rank = 5;
    double noise_sigma = 0.005;
    double coeff_mean = 0.5;
    /// Standard deviation of the Gaussian whose absolute value gives c_l.
    double coeff_std = 1.0;
    std::uint64_t seed = 0;
    std::size_t lambda_points = 30;

    void validate() const;
};

struct GeneratedData {
    DenseTensor observed; // clean + noise
    DenseTensor clean;
    DiscreteMeasure truth;
};

/// Factors are unit-normalized standard Gaussian vectors, c_l = |coeff_std*g
/// + coeff_mean|, and every entry gets noise_sigma*g added. Each of the three
/// draws uses its own substream of `seed`.
GeneratedData generate(const ExperimentSpec &spec);

struct PathRecord {
    double lambda = 0.0;
    double lambda_ratio = 0.0;
    std::size_t estimated_rank = 0;
    double objective = 0.0;
    StopReason stop_reason = StopReason::MaxIters;
    double certificate = 0.0;
    std::string atoms_file;
    DiscreteMeasure measure;
};

struct PathResult {
    double lambda_max = 0.0;
    std::vector<PathRecord> records; // increasing lambda
};

struct PathOptions {
    std::size_t lambda_points = 30;
    SfwConfig sfw;
    /// When set, each grid point's measure is written to
    /// `<atoms_dir>/atoms_<index>.json`.
    std::optional<std::filesystem::path> atoms_dir;
};

/// Uniform grid lambda_j = j / (points - 1) * lambda_max.
std::vector<double> lambda_grid(double lambda_max, std::size_t points);

/// Solves on the whole grid from the largest lambda down, warm-starting each
/// point from the previous measure.
PathResult run_path(const Vector &y, const LinearOperator &op, const PathOptions &opts);

/// Header `lambda,lambda_ratio,estimated_rank,objective,stop_reason`.
std::string path_csv(const PathResult &path);
std::string path_json(const PathResult &path, const Shape &shape);

/// Rank a matrix prox would report on the same grid: the number of singular
/// values strictly above lambda.
std::vector<std::size_t> matrix_rank_path(const Vector &singular_values, const std::vector<double> &grid);

} // namespace sfw
