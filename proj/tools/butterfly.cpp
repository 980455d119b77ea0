#include "butterfly.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "amo/contfrac.hpp"

namespace amo::tools {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string cell(double x) { return std::isnan(x) ? std::string() : format_double(x); }

double parse_cell(const std::string& s) {
  if (s.empty()) return kNaN;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::runtime_error("bad number '" + s + "' in CSV");
  return v;
}

std::int64_t parse_int(const std::string& s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::runtime_error("bad integer '" + s + "' in CSV");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<BandRow> band_rows(const BandStructure& bs) {
  std::vector<BandRow> rows;
  for (std::int64_t j = -bs.s; j <= bs.s; ++j) {
    BandRow r;
    r.p = bs.p;
    r.q = bs.q;
    r.j = j;
    r.lambda = bs.lambda_at(j);
    r.eta = bs.eta(j);
    r.mu = bs.mu(j);
    r.w = bs.w_at(j);
    r.w_prime = bs.w_prime_at(j);
    r.ell = std::exp(std::log(4.0) - bs.log_abs_sigma_prime[bs.idx(j)]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<GapRow> gap_rows(const BandStructure& bs) {
  std::vector<GapRow> rows;
  for (std::int64_t j = -bs.s; j < bs.s; ++j) {
    GapRow r;
    r.p = bs.p;
    r.q = bs.q;
    r.j = j;
    r.left = bs.right(j);
    r.right = bs.left(j + 1);
    r.delta = bs.delta_at(j);
    rows.push_back(r);
  }
  return rows;
}

std::vector<BandRow> sampled_rows(std::int64_t p, std::int64_t q) {
  std::vector<BandRow> rows;
  std::int64_t j = 0;
  for (const Interval& iv : sampled_band_intervals(p, q)) {
    BandRow r;
    r.p = p;
    r.q = q;
    r.j = j++;
    r.lambda = 0.5 * (iv.lo + iv.hi);
    r.w = iv.hi - r.lambda;
    r.w_prime = r.lambda - iv.lo;
    r.eta = r.mu = r.ell = kNaN;
    r.sampled = true;
    rows.push_back(r);
  }
  return rows;
}

std::string bands_csv(const std::vector<BandRow>& rows, bool with_source) {
  std::string out = kBandHeader;
  if (with_source) out += ",source";
  out += '\n';
  for (const BandRow& r : rows) {
    out += std::to_string(r.p) + ',' + std::to_string(r.q) + ',' + std::to_string(r.j) + ',' + cell(r.lambda) + ',' +
           cell(r.eta) + ',' + cell(r.mu) + ',' + cell(r.w) + ',' + cell(r.w_prime) + ',' + cell(r.ell);
    if (with_source) out += r.sampled ? ",sampled" : ",taxonomy";
    out += '\n';
  }
  return out;
}

std::string gaps_csv(const std::vector<GapRow>& rows) {
  std::string out = kGapHeader;
  out += '\n';
  for (const GapRow& r : rows)
    out += std::to_string(r.p) + ',' + std::to_string(r.q) + ',' + std::to_string(r.j) + ',' + cell(r.left) + ',' +
           cell(r.right) + ',' + cell(r.delta) + '\n';
  return out;
}

std::vector<BandRow> butterfly_rows(std::int64_t qmax, int jobs) {
  if (qmax < 1) throw std::invalid_argument("qmax must be >= 1");
  std::vector<std::pair<std::int64_t, std::int64_t>> work;
  for (std::int64_t q = 1; q <= qmax; ++q)
    for (std::int64_t p = 0; p <= q; ++p)
      if (gcd(p, q) == 1) work.push_back({p, q});
  std::vector<std::vector<BandRow>> results(work.size());
  std::vector<std::string> errors(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) {
      const auto [p, q] = work[i];
      try {
        results[i] = q % 2 == 1 ? band_rows(extract_band_structure(p, q)) : sampled_rows(p, q);
      } catch (const std::exception& e) {
        errors[i] = std::to_string(p) + "/" + std::to_string(q) + ": " + e.what();
      }
    }
  };
  const int n = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<BandRow> rows;
  for (std::size_t i = 0; i < work.size(); ++i) {
    if (!errors[i].empty()) throw std::runtime_error(errors[i]);
    rows.insert(rows.end(), results[i].begin(), results[i].end());
  }
  return rows;
}

std::vector<BandRow> parse_bands_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  const std::vector<std::string> header = split(line);
  const bool with_source = header.size() == 10 && header[9] == "source";
  if (line.rfind(kBandHeader, 0) != 0 || (header.size() != 9 && !with_source))
    throw std::runtime_error("unexpected CSV header '" + line + "'");
  std::vector<BandRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line);
    if (f.size() != header.size()) throw std::runtime_error("wrong field count on CSV line " + std::to_string(lineno));
    BandRow r;
    r.p = parse_int(f[0]);
    r.q = parse_int(f[1]);
    r.j = parse_int(f[2]);
    r.lambda = parse_cell(f[3]);
    r.eta = parse_cell(f[4]);
    r.mu = parse_cell(f[5]);
    r.w = parse_cell(f[6]);
    r.w_prime = parse_cell(f[7]);
    r.ell = parse_cell(f[8]);
    if (with_source) {
      if (f[9] != "sampled" && f[9] != "taxonomy") throw std::runtime_error("bad source on CSV line " + std::to_string(lineno));
      r.sampled = f[9] == "sampled";
    }
    rows.push_back(r);
  }
  return rows;
}

std::string render_svg(const std::vector<BandRow>& rows) {
  constexpr double width = 800.0, height = 800.0, margin = 40.0;
  const double plot_w = width - 2.0 * margin, plot_h = height - 2.0 * margin;
  std::int64_t qmax = 1;
  for (const BandRow& r : rows) qmax = std::max(qmax, r.q);
  const double stroke = std::max(0.4, std::min(2.0, plot_h / (static_cast<double>(qmax * qmax) + 1.0)));
  auto px = [&](double E) { return margin + (E + 4.0) / 8.0 * plot_w; };
  auto py = [&](double alpha) { return margin + (1.0 - alpha) * plot_h; };
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                width, height, width, height);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"none\" stroke=\"#888\" stroke-width=\"0.5\"/>\n",
                margin, margin, plot_w, plot_h);
  out += buf;
  std::snprintf(buf, sizeof buf, "<g stroke-width=\"%.3f\" stroke-linecap=\"butt\">\n", stroke);
  out += buf;
  for (const BandRow& r : rows) {
    const double alpha = static_cast<double>(r.p) / static_cast<double>(r.q);
    const double lo = r.lambda - r.w_prime, hi = r.lambda + r.w;
    double x1 = px(lo), x2 = px(hi);
    if (x2 - x1 < 0.2) {
      const double c = 0.5 * (x1 + x2);
      x1 = c - 0.1;
      x2 = c + 0.1;
    }
    std::snprintf(buf, sizeof buf, "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"%s\"/>\n", x1,
                  py(alpha), x2, py(alpha), r.sampled ? "#1f5fa8" : "#111");
    out += buf;
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace amo::tools
