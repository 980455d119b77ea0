#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "amo/spectrum.hpp"
#include "butterfly.hpp"
#include "commands.hpp"

namespace {

using amo::tools::json;

struct Frequency {
  std::int64_t p = -1, q = -1;
  std::string cf;

  void add_options(CLI::App* app, bool allow_cf) {
    auto* po = app->add_option("-p", p, "numerator");
    auto* qo = app->add_option("-q", q, "denominator");
    if (allow_cf) {
      auto* co = app->add_option("--cf", cf, "continued fraction coefficients a1,a2,...");
      co->excludes(po)->excludes(qo);
    }
    po->needs(qo);
    qo->needs(po);
  }
  bool given() const { return q >= 0 || !cf.empty(); }
  amo::ContinuedFraction expansion() const {
    if (!cf.empty()) return amo::parse_coefficients(cf);
    return amo::expand(amo::make_fraction(p, q));
  }
  amo::Fraction fraction() const { return cf.empty() ? amo::make_fraction(p, q) : amo::evaluate(expansion()); }
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  // write next to the target, then rename, so readers never see a partial file
  const std::filesystem::path target(out);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << text;
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Accept the single-dash spelling -cf used throughout the documentation.
std::vector<std::string> normalize_args(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "-cf")
      a = "--cf";
    else if (a.rfind("-cf=", 0) == 0)
      a = "-" + a;
    args.push_back(a);
  }
  std::reverse(args.begin(), args.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Band structure, exact sums and inequality checks for the critical almost Mathieu operator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "amo 0.1.0");

  std::string format = "json", out, precision = "auto", suite = "all", in_path;
  std::int64_t qmax = 0;
  std::optional<std::int64_t> k;
  std::int64_t k_req = 0;
  double tol = 1e-10;
  int jobs = 1;
  std::vector<double> energies;

  Frequency f_cf, f_sigma, f_spec, f_gaps, f_sums, f_rec, f_ver;

  auto* cf_cmd = app.add_subcommand("cf", "continued fraction, convergents, tails and parity");
  f_cf.add_options(cf_cmd, true);

  auto* sigma_cmd = app.add_subcommand("sigma", "discriminant and its derivative at given energies");
  f_sigma.add_options(sigma_cmd, false);
  sigma_cmd->add_option("-E,--energy", energies, "energies")->required();

  auto* spec_cmd = app.add_subcommand("spectrum", "bands and gaps of S(p/q), odd q");
  f_spec.add_options(spec_cmd, false);
  spec_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  spec_cmd->add_option("--precision", precision)->check(CLI::IsMember({"auto", "double"}));

  auto* gaps_cmd = app.add_subcommand("gaps", "gap table of S(p/q), odd q");
  f_gaps.add_options(gaps_cmd, false);
  gaps_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* sums_cmd = app.add_subcommand("sums", "F table, S_k, L_k by both routes, bound slacks");
  f_sums.add_options(sums_cmd, false);
  sums_cmd->add_option("-k", k, "index 0 <= k <= (q-1)/2 (all when omitted)");

  auto* rec_cmd = app.add_subcommand("recursion", "contour-integral recursion for S(p/q, gamma_1)");
  f_rec.add_options(rec_cmd, true);
  rec_cmd->add_option("-k", k_req, "index k")->required();
  rec_cmd->add_option("--tol", tol, "quadrature tolerance");

  auto* ver_cmd = app.add_subcommand("verify", "inequality and identity checks");
  f_ver.add_options(ver_cmd, true);
  ver_cmd->add_option("--suite", suite)->check(CLI::IsMember({"all", "lemma1", "lemma2", "thm3", "thm4"}));
  ver_cmd->add_option("--qmax", qmax, "run over every parity-admissible p/q with odd q <= qmax");
  ver_cmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

  auto* bf_cmd = app.add_subcommand("butterfly", "band rows for every p/q with q <= qmax");
  bf_cmd->add_option("--qmax", qmax)->required()->check(CLI::PositiveNumber);
  bf_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "svg"}));
  bf_cmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

  auto* render_cmd = app.add_subcommand("render", "SVG from a butterfly CSV");
  render_cmd->add_option("--in", in_path)->required();

  for (auto* c : {cf_cmd, sigma_cmd, spec_cmd, gaps_cmd, sums_cmd, rec_cmd, ver_cmd, bf_cmd, render_cmd})
    c->add_option("--out", out, "output file (stdout when omitted)");

  try {
    std::vector<std::string> args = normalize_args(argc, argv);
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string command;
  for (auto* c : app.get_subcommands()) command = c->get_name();
  try {
    auto need = [](const Frequency& f) {
      if (!f.given()) throw UsageError("a frequency is required (-p P -q Q or -cf a1,a2,...)");
    };
    if (cf_cmd->parsed()) {
      need(f_cf);
      emit(dump(amo::tools::cf_command(f_cf.expansion())), out);
    } else if (sigma_cmd->parsed()) {
      need(f_sigma);
      emit(dump(amo::tools::sigma_command(f_sigma.p, f_sigma.q, energies)), out);
    } else if (spec_cmd->parsed() || gaps_cmd->parsed()) {
      const Frequency& f = spec_cmd->parsed() ? f_spec : f_gaps;
      need(f);
      amo::SpectrumOptions opts;
      opts.precision = precision == "double" ? amo::Precision::Double : amo::Precision::Auto;
      const amo::BandStructure bs = amo::extract_band_structure(f.p, f.q, opts);
      if (format == "csv") {
        std::string text;
        if (spec_cmd->parsed()) text = amo::tools::bands_csv(amo::tools::band_rows(bs)) + "\n";
        text += amo::tools::gaps_csv(amo::tools::gap_rows(bs));
        emit(text, out);
      } else {
        json j = amo::tools::to_json(bs);
        if (gaps_cmd->parsed()) j.erase("bands");
        emit(dump(j), out);
      }
    } else if (sums_cmd->parsed()) {
      need(f_sums);
      emit(dump(amo::tools::sums_command(f_sums.p, f_sums.q, k)), out);
    } else if (rec_cmd->parsed()) {
      need(f_rec);
      amo::QuadratureConfig cfg;
      cfg.tol = tol;
      emit(dump(amo::tools::recursion_command(f_rec.expansion(), k_req, cfg)), out);
    } else if (ver_cmd->parsed()) {
      const amo::Suite s = amo::parse_suite(suite);
      bool passed = true;
      json j;
      if (qmax > 0) {
        if (f_ver.given()) throw UsageError("--qmax excludes -p/-q/-cf");
        j = amo::tools::verify_batch(s, qmax, jobs, &passed);
      } else {
        need(f_ver);
        const amo::SuiteResult r = amo::run_suite(s, f_ver.expansion());
        j = json{{"suite", suite}, {"frequency", {{"p", f_ver.fraction().num}, {"q", f_ver.fraction().den}}}};
        j.update(amo::tools::to_json(r));
        passed = r.report.passed();
      }
      emit(dump(j), out);
      return passed ? 0 : 1;
    } else if (bf_cmd->parsed()) {
      const auto rows = amo::tools::butterfly_rows(qmax, jobs);
      const std::string csv = amo::tools::bands_csv(rows, true);
      if (format == "svg")
        emit(amo::tools::render_svg(amo::tools::parse_bands_csv(csv)), out);
      else
        emit(csv, out);
    } else if (render_cmd->parsed()) {
      emit(amo::tools::render_svg(amo::tools::parse_bands_csv(read_file(in_path))), out);
    }
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cout << json{{"command", command}, {"error", e.what()}}.dump(2) << "\n";
    return 1;
  }
  return 0;
}
