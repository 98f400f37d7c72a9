#include "sfw/serialization.hpp"

#include <cmath>

#include "sfw/errors.hpp"

namespace sfw::io {

json measure_to_json(const DiscreteMeasure &mu, const Shape &shape) {
    json factors = json::array();
    for (const auto &a : mu.atoms)
        factors.push_back(a.factors());
    return json{{"shape", shape}, {"coefficients", mu.coefficients}, {"factors", factors}};
}

DiscreteMeasure measure_from_json(const json &j) {
    const auto shape = j.at("shape").get<Shape>();
    const auto coefs = j.at("coefficients").get<Vector>();
    const auto factors = j.at("factors").get<std::vector<std::vector<Vector>>>();
    if (coefs.size() != factors.size())
        throw ShapeError("measure JSON: coefficients and factors differ in length");
    DiscreteMeasure mu;
    for (std::size_t l = 0; l < coefs.size(); ++l) {
        auto canon = Atom::canonicalize(factors[l]);
        if (canon.atom.shape() != shape)
            throw ShapeError("measure JSON: atom shape differs from declared shape");
        // Stored factors are already unit; only a sign can move for t == 1.
        mu.push_back(coefs[l] * (canon.scale < 0.0 ? -1.0 : 1.0), std::move(canon.atom));
    }
    return mu;
}

json result_to_json(const SfwResult &r, const Shape &shape, double lambda) {
    json j = measure_to_json(r.measure, shape);
    j["lambda"] = lambda;
    j["stop_reason"] = to_string(r.stop_reason);
    j["estimated_rank"] = r.estimated_rank;
    j["certificate"] = r.certificate;
    j["outer_iterations"] = r.outer_iterations;
    j["objective_trace"] = r.objective_trace;
    return j;
}

SfwResult result_from_json(const json &j) {
    SfwResult r;
    r.measure = measure_from_json(j);
    r.stop_reason = stop_reason_from_string(j.at("stop_reason").get<std::string>());
    r.estimated_rank = j.at("estimated_rank").get<std::size_t>();
    r.certificate = j.value("certificate", 0.0);
    r.outer_iterations = j.value("outer_iterations", 0);
    r.objective_trace = j.at("objective_trace").get<Vector>();
    return r;
}

json rank_one_to_json(const RankOneResult &r) {
    return json{{"shape", r.atom.shape()},
                {"factors", r.atom.factors()},
                {"correlation", r.correlation},
                {"iterations", r.iterations},
                {"init", r.init.to_string()}};
}

} // namespace sfw::io
