#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "amo/contfrac.hpp"
#include "amo/contour.hpp"
#include "amo/spectrum.hpp"
#include "amo/verify.hpp"

namespace amo::tools {

using json = nlohmann::ordered_json;

json to_json(const BandStructure& bs);
json to_json(const CheckRecord& r);
json to_json(const VerificationReport& r);
json to_json(const SuiteResult& r);
json to_json(const RecursionResult& r);

json cf_command(const ContinuedFraction& cf);
json sigma_command(std::int64_t p, std::int64_t q, const std::vector<double>& energies);
json sums_command(std::int64_t p, std::int64_t q, std::optional<std::int64_t> k);
json recursion_command(const ContinuedFraction& cf, std::int64_t k, const QuadratureConfig& cfg);

// Every parity-admissible p/q with odd q <= qmax, run through the suite.
json verify_batch(Suite suite, std::int64_t qmax, int jobs, bool* passed);

}  // namespace amo::tools
