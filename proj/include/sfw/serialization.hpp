#pragma once

#include "json.hpp"

#include "sfw/rank_one.hpp"
#include "sfw/sfw.hpp"
#include "sfw/tensor.hpp"

namespace sfw::io {

using nlohmann::json;

/// {"shape": [...], "coefficients": [...], "factors": [[u1, ..., ut], ...]}
json measure_to_json(const DiscreteMeasure &mu, const Shape &shape);
/// Factors are renormalized and sign-canonicalized on load.
DiscreteMeasure measure_from_json(const json &j);

/// Measure fields plus lambda, stop_reason, estimated_rank, certificate,
/// outer_iterations and objective_trace.
json result_to_json(const SfwResult &r, const Shape &shape, double lambda);
SfwResult result_from_json(const json &j);

json rank_one_to_json(const RankOneResult &r);

} // namespace sfw::io
