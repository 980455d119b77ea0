#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "amo/spectrum.hpp"

namespace amo::tools {

// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

struct BandRow {
  std::int64_t p = 0, q = 1, j = 0;
  double lambda = 0.0, eta = 0.0, mu = 0.0, w = 0.0, w_prime = 0.0, ell = 0.0;
  bool sampled = false;  // even q: edges from sign sampling, no j-taxonomy (eta, mu, ell left empty)
};

struct GapRow {
  std::int64_t p = 0, q = 1, j = 0;
  double left = 0.0, right = 0.0, delta = 0.0;
};

std::vector<BandRow> band_rows(const BandStructure& bs);
std::vector<GapRow> gap_rows(const BandStructure& bs);
std::vector<BandRow> sampled_rows(std::int64_t p, std::int64_t q);

inline const char* kBandHeader = "p,q,j,lambda,eta,mu,w,w_prime,ell";
inline const char* kGapHeader = "p,q,j,left,right,delta";

std::string bands_csv(const std::vector<BandRow>& rows, bool with_source = false);
std::string gaps_csv(const std::vector<GapRow>& rows);

// All frequencies p/q with 0 <= p <= q <= qmax, gcd(p, q) = 1, in (q, p) order.
std::vector<BandRow> butterfly_rows(std::int64_t qmax, int jobs);

// Parses the output of bands_csv(rows, true). Throws std::runtime_error on malformed input.
std::vector<BandRow> parse_bands_csv(const std::string& text);

// Depends only on the rows, so rendering parsed CSV reproduces the original SVG.
std::string render_svg(const std::vector<BandRow>& rows);

}  // namespace amo::tools
