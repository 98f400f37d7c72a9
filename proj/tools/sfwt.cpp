// Command-line front end: synthetic data, single solves, lambda sweeps and
// the matrix soft-thresholding oracle.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "sfw/errors.hpp"
#include "sfw/experiment.hpp"
#include "sfw/matrix_baseline.hpp"
#include "sfw/serialization.hpp"
#include "sfw/tensor_io.hpp"

namespace fs = std::filesystem;
using namespace sfw;

namespace {

enum ExitCode { Ok = 0, Validation = 1, Io = 2, Numerical = 3 };

struct ObservationOptions {
    std::string mask_file;
    double mask_fraction = 0.0;
    std::uint64_t mask_seed = 0;

    void add(CLI::App *cmd) {
        cmd->add_option("--mask", mask_file, "File of observed flat indices (one per line)");
        cmd->add_option("--mask-fraction", mask_fraction, "Observe a random fraction of entries instead");
        cmd->add_option("--mask-seed", mask_seed, "Seed for --mask-fraction");
    }

    LinearOperator make(const Shape &shape) const {
        if (!mask_file.empty() && mask_fraction > 0.0)
            throw std::invalid_argument("--mask and --mask-fraction are mutually exclusive");
        if (!mask_file.empty())
            return LinearOperator::mask(shape, io::read_mask_indices(mask_file));
        if (mask_fraction > 0.0)
            return LinearOperator::random_mask(shape, mask_fraction, mask_seed);
        return LinearOperator::vectorization(shape);
    }
};

struct SolverOptions {
    int max_outer = 50;
    int slide_iters = 20;
    double dual_tol = 1e-4;
    int restarts = 10;
    bool no_hosvd = false;
    int max_als_iters = 200;
    std::uint64_t seed = 0;

    void add(CLI::App *cmd) {
        cmd->add_option("--max-outer", max_outer, "Maximum Frank-Wolfe iterations")->capture_default_str();
        cmd->add_option("--slide-iters", slide_iters, "Sliding sweeps per iteration")->capture_default_str();
        cmd->add_option("--dual-tol", dual_tol, "Relative certificate slack")->capture_default_str();
        add_rank_one(cmd);
    }

    void add_rank_one(CLI::App *cmd) {
        cmd->add_option("--restarts", restarts, "Random ALS restarts")->capture_default_str();
        cmd->add_flag("--no-hosvd", no_hosvd, "Skip the HOSVD initialization");
        cmd->add_option("--max-als-iters", max_als_iters, "ALS sweeps per start")->capture_default_str();
        cmd->add_option("--seed", seed, "Seed for ALS restarts")->capture_default_str();
    }

    RankOneConfig rank_one() const {
        RankOneConfig c;
        c.num_random_restarts = restarts;
        c.use_hosvd_init = !no_hosvd;
        c.max_als_iters = max_als_iters;
        c.rng_seed = seed;
        return c;
    }

    SfwConfig sfw(double lambda) const {
        SfwConfig c;
        c.lambda = lambda;
        c.max_outer_iters = max_outer;
        c.slide_iters = slide_iters;
        c.dual_tol = dual_tol;
        c.rank_one_cfg = rank_one();
        return c;
    }
};

Shape parse_shape(const std::string &text) {
    Shape shape;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string tok = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::size_t pos = 0;
        unsigned long long n = 0;
        try {
            n = std::stoull(tok, &pos);
        } catch (const std::exception &) {
            pos = 0;
        }
        if (pos != tok.size() || n == 0)
            throw std::invalid_argument("invalid shape '" + text + "'");
        shape.push_back(static_cast<std::size_t>(n));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return shape;
}

void emit(const std::string &text, const std::string &path) {
    if (path.empty())
        std::cout << text;
    else
        io::write_file(path, text);
}

int run(int argc, char **argv) {
    CLI::App app{"Low-rank tensor approximation by sliding Frank-Wolfe over rank-one atoms"};
    app.require_subcommand(1);

    // generate
    auto *gen = app.add_subcommand("generate", "Write a synthetic low-rank tensor plus noise");
    std::string gen_shape = "20,21,22";
    ExperimentSpec spec;
    std::string gen_out;
    std::string gen_format = "txt";
    gen->add_option("--shape", gen_shape, "Comma-separated extents")->capture_default_str();
    gen->add_option("--rank", spec.true_rank, "Number of rank-one terms")->capture_default_str();
    gen->add_option("--sigma", spec.noise_sigma, "Noise standard deviation")->capture_default_str();
    gen->add_option("--coeff-mean", spec.coeff_mean, "Mean of the Gaussian behind |c|")->capture_default_str();
    gen->add_option("--coeff-std", spec.coeff_std, "Std of the Gaussian behind |c|")->capture_default_str();
    gen->add_option("--seed", spec.seed, "Seed")->capture_default_str();
    gen->add_option("-o,--output", gen_out, "Output directory")->required();
    gen->add_option("--format", gen_format, "Tensor file format")
        ->check(CLI::IsMember({"txt", "csv"}))
        ->capture_default_str();

    // path
    auto *path = app.add_subcommand("path", "Sweep lambda from lambda_max down to 0");
    std::string path_in, path_out, path_json_out, path_atoms;
    std::size_t lambda_points = 30;
    SolverOptions path_solver;
    ObservationOptions path_obs;
    path->add_option("--input", path_in, "Tensor file")->required();
    path->add_option("--lambda-points", lambda_points, "Grid size")->capture_default_str();
    path->add_option("-o,--output", path_out, "CSV output (stdout if omitted)");
    path->add_option("--json", path_json_out, "JSON output (defaults to the CSV path with .json)");
    path->add_option("--atoms-dir", path_atoms, "Directory for per-lambda result files");
    path_solver.add(path);
    path_obs.add(path);

    // solve
    auto *solve = app.add_subcommand("solve", "Solve at a single lambda");
    std::string solve_in, solve_out;
    std::optional<double> solve_lambda, solve_ratio;
    SolverOptions solve_solver;
    ObservationOptions solve_obs;
    solve->add_option("--input", solve_in, "Tensor file")->required();
    auto *lam_opt = solve->add_option("--lambda", solve_lambda, "Regularization weight");
    auto *ratio_opt = solve->add_option("--lambda-ratio", solve_ratio, "Regularization as a fraction of lambda_max");
    lam_opt->excludes(ratio_opt);
    solve->add_option("-o,--output", solve_out, "Result JSON (stdout if omitted)");
    solve_solver.add(solve);
    solve_obs.add(solve);

    // rank-one
    auto *r1 = app.add_subcommand("rank-one", "Best rank-one approximation");
    std::string r1_in, r1_out;
    SolverOptions r1_solver;
    r1->add_option("--input", r1_in, "Tensor file")->required();
    r1->add_option("-o,--output", r1_out, "Result JSON (stdout if omitted)");
    r1_solver.add_rank_one(r1);

    // oracle
    auto *oracle = app.add_subcommand("oracle", "Matrix nuclear-norm prox by singular value soft-thresholding");
    std::string or_in, or_out;
    double or_lambda = 0.0;
    oracle->add_option("--input", or_in, "Matrix (order-2 tensor) file")->required();
    oracle->add_option("--lambda", or_lambda, "Regularization weight")->required();
    oracle->add_option("-o,--output", or_out, "Write the prox matrix to this tensor file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : Validation;
    }

    if (gen->parsed()) {
        spec.shape = parse_shape(gen_shape);
        const GeneratedData data = generate(spec);
        const fs::path dir(gen_out);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec)
            throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
        io::write_tensor(dir / (gen_format == "csv" ? "tensor.csv" : "tensor.txt"), data.observed);
        auto truth = io::measure_to_json(data.truth, spec.shape);
        truth["seed"] = spec.seed;
        truth["noise_sigma"] = spec.noise_sigma;
        truth["coeff_mean"] = spec.coeff_mean;
        truth["coeff_std"] = spec.coeff_std;
        io::write_file(dir / "truth.json", truth.dump(2) + "\n");
        return Ok;
    }

    if (path->parsed()) {
        const DenseTensor t = io::read_tensor(path_in);
        const LinearOperator op = path_obs.make(t.shape());
        PathOptions opts;
        opts.lambda_points = lambda_points;
        opts.sfw = path_solver.sfw(0.0);
        if (!path_atoms.empty()) {
            std::error_code ec;
            fs::create_directories(path_atoms, ec);
            if (ec)
                throw IoError("cannot create directory '" + path_atoms + "': " + ec.message());
            opts.atoms_dir = fs::path(path_atoms);
        }
        const PathResult res = run_path(op.apply(t), op, opts);
        emit(path_csv(res), path_out);
        std::string json_out = path_json_out;
        if (json_out.empty() && !path_out.empty())
            json_out = fs::path(path_out).replace_extension(".json").string();
        if (!json_out.empty())
            io::write_file(json_out, path_json(res, t.shape()));
        return Ok;
    }

    if (solve->parsed()) {
        if (!solve_lambda && !solve_ratio)
            throw std::invalid_argument("solve needs --lambda or --lambda-ratio");
        const DenseTensor t = io::read_tensor(solve_in);
        const LinearOperator op = solve_obs.make(t.shape());
        const Vector y = op.apply(t);
        SfwConfig cfg = solve_solver.sfw(0.0);
        cfg.lambda = solve_lambda ? *solve_lambda : *solve_ratio * lambda_max(y, op, cfg);
        const SfwResult res = sfw_solve(y, op, cfg);
        emit(io::result_to_json(res, t.shape(), cfg.lambda).dump(2) + "\n", solve_out);
        return Ok;
    }

    if (r1->parsed()) {
        const DenseTensor t = io::read_tensor(r1_in);
        const RankOneResult res = best_rank_one(t, r1_solver.rank_one());
        emit(io::rank_one_to_json(res).dump(2) + "\n", r1_out);
        return Ok;
    }

    if (oracle->parsed()) {
        const DenseTensor t = io::read_tensor(or_in);
        const Matrix m = as_matrix(t);
        const SvdFactors f = svd(m);
        const Matrix prox = nuclear_prox(m, or_lambda);
        if (!or_out.empty())
            io::write_tensor(or_out, as_tensor(prox));
        std::size_t rank = 0;
        double thresholded = 0.0;
        for (double s : f.singular_values)
            if (s > or_lambda) {
                ++rank;
                thresholded += s - or_lambda;
            }
        const double fit = frobenius_norm(m - prox);
        io::json j{{"singular_values", f.singular_values},
                   {"nuclear_norm", nuclear_norm(m)},
                   {"lambda", or_lambda},
                   {"rank", rank},
                   {"objective", 0.5 * fit * fit + or_lambda * thresholded},
                   {"dominant", {{"singular_value", f.singular_values.empty() ? 0.0 : f.singular_values[0]},
                                 {"u", f.u.column(0)},
                                 {"v", f.v.column(0)}}}};
        std::cout << j.dump(2) << "\n";
        return Ok;
    }
    return Validation;
}

} // namespace

int main(int argc, char **argv) {
    try {
        return run(argc, argv);
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return Io;
    } catch (const NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return Numerical;
    } catch (const std::logic_error &e) {
        // invalid_argument, domain_error (degenerate input) and out_of_range
        std::cerr << "error: " << e.what() << "\n";
        return Validation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return Io;
    }
}
