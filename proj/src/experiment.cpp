#include "sfw/experiment.hpp"

#include <cmath>
#include <stdexcept>

#include "sfw/random.hpp"
#include "sfw/serialization.hpp"
#include "sfw/tensor_io.hpp"

namespace sfw {

void ExperimentSpec::validate() const {
    DenseTensor probe(shape);
    if (true_rank < 1)
        throw std::invalid_argument("rank must be at least 1");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
        throw std::invalid_argument("noise sigma must be finite and nonnegative");
    if (!std::isfinite(coeff_mean) || !(coeff_std >= 0.0) || !std::isfinite(coeff_std))
        throw std::invalid_argument("coefficient distribution parameters must be finite, std nonnegative");
    if (lambda_points < 2)
        throw std::invalid_argument("lambda grid needs at least two points");
}

GeneratedData generate(const ExperimentSpec &spec) {
    spec.validate();
    Rng factor_rng(spec.seed, Stream::Factors);
    Rng coeff_rng(spec.seed, Stream::Coefficients);
    Rng noise_rng(spec.seed, Stream::Noise);

    GeneratedData out;
    for (std::size_t l = 0; l < spec.true_rank; ++l) {
        std::vector<Vector> factors;
        for (auto n : spec.shape)
            factors.push_back(factor_rng.normal_vector(n));
        auto canon = Atom::canonicalize(std::move(factors));
        const double c = std::abs(spec.coeff_std * coeff_rng.normal() + spec.coeff_mean);
        out.truth.push_back(canon.scale < 0.0 ? -c : c, std::move(canon.atom));
    }
    out.clean = evaluate(out.truth, spec.shape);
    out.observed = out.clean;
    for (auto &x : out.observed.data())
        x += spec.noise_sigma * noise_rng.normal();
    return out;
}

std::vector<double> lambda_grid(double lambda_max, std::size_t points) {
    if (points < 2)
        throw std::invalid_argument("lambda grid needs at least two points");
    std::vector<double> grid(points);
    for (std::size_t j = 0; j < points; ++j)
        grid[j] = lambda_max * static_cast<double>(j) / static_cast<double>(points - 1);
    grid.back() = lambda_max;
    return grid;
}

PathResult run_path(const Vector &y, const LinearOperator &op, const PathOptions &opts) {
    PathResult out;
    out.lambda_max = lambda_max(y, op, opts.sfw);
    const auto grid = lambda_grid(out.lambda_max, opts.lambda_points);
    out.records.resize(grid.size());

    std::optional<DiscreteMeasure> warm;
    for (std::size_t k = grid.size(); k-- > 0;) {
        SfwConfig cfg = opts.sfw;
        cfg.lambda = grid[k];
        SfwResult r = sfw_solve(y, op, cfg, warm);

        PathRecord &rec = out.records[k];
        rec.lambda = grid[k];
        rec.lambda_ratio = out.lambda_max > 0.0 ? grid[k] / out.lambda_max : 0.0;
        rec.estimated_rank = r.estimated_rank;
        rec.objective = blasso_objective(y, r.measure, op, cfg.lambda);
        rec.stop_reason = r.stop_reason;
        rec.certificate = r.certificate;
        if (opts.atoms_dir) {
            const auto file = *opts.atoms_dir / ("atoms_" + std::to_string(k) + ".json");
            io::write_file(file, io::result_to_json(r, op.domain_shape(), cfg.lambda).dump(2) + "\n");
            rec.atoms_file = file.string();
        }
        rec.measure = r.measure;
        warm = std::move(r.measure);
    }
    return out;
}

std::string path_csv(const PathResult &path) {
    std::string out = "lambda,lambda_ratio,estimated_rank,objective,stop_reason\n";
    for (const auto &r : path.records) {
        out += io::format_double(r.lambda) + "," + io::format_double(r.lambda_ratio) + "," +
               std::to_string(r.estimated_rank) + "," + io::format_double(r.objective) + "," +
               to_string(r.stop_reason) + "\n";
    }
    return out;
}

std::string path_json(const PathResult &path, const Shape &shape) {
    io::json records = io::json::array();
    for (const auto &r : path.records) {
        records.push_back({{"lambda", r.lambda},
                           {"lambda_over_lambda_max", r.lambda_ratio},
                           {"estimated_rank", r.estimated_rank},
                           {"objective", r.objective},
                           {"stop_reason", to_string(r.stop_reason)},
                           {"certificate", r.certificate},
                           {"atoms_file", r.atoms_file}});
    }
    return io::json{{"shape", shape}, {"lambda_max", path.lambda_max}, {"records", records}}.dump(2) + "\n";
}

std::vector<std::size_t> matrix_rank_path(const Vector &singular_values, const std::vector<double> &grid) {
    std::vector<std::size_t> ranks;
    ranks.reserve(grid.size());
    for (double lambda : grid) {
        std::size_t r = 0;
        for (double s : singular_values)
            if (s > lambda)
                ++r;
        ranks.push_back(r);
    }
    return ranks;
}

} // namespace sfw
