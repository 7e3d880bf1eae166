// fracstab: batch driver exposing each experiment as a subcommand with
// machine-readable CSV/JSON output. Exit codes: 0 success, 2 validation,
// 3 numerical failure, 4 I/O failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracstab/constants.hpp"
#include "fracstab/errors.hpp"
#include "fracstab/fde.hpp"
#include "fracstab/functional.hpp"
#include "fracstab/harmonics.hpp"
#include "fracstab/manifold.hpp"
#include "fracstab/random.hpp"
#include "fracstab/sphere.hpp"
#include "fracstab/stability.hpp"

namespace {

using fracstab::IoError;
using fracstab::ValidationError;
using json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Applies JSON config values to options the command line left untouched and
/// rejects keys that no option claimed.
class ConfigMerge {
 public:
  explicit ConfigMerge(std::string path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file: " + path);
    try {
      in >> doc_;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("config: " + std::string(e.what()));
    }
    if (!doc_.is_object()) {
      throw ValidationError("config: top-level value must be an object");
    }
  }

  template <typename T>
  void apply(const char* key, const CLI::Option* opt, T& target) {
    auto it = doc_.find(key);
    if (it == doc_.end()) return;
    claimed_.push_back(key);
    if (opt != nullptr && opt->count() > 0) return;  // flags override config
    try {
      target = it->get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ValidationError(std::string("config: bad value for key '") + key +
                            "'");
    }
  }

  void applyWindow(const char* key, const CLI::Option* opt,
                   std::optional<std::pair<double, double>>& target) {
    auto it = doc_.find(key);
    if (it == doc_.end()) return;
    claimed_.push_back(key);
    if (opt != nullptr && opt->count() > 0) return;
    if (!it->is_array() || it->size() != 2) {
      throw ValidationError("config: 'window' must be an array [lo, hi]");
    }
    target = std::make_pair((*it)[0].get<double>(), (*it)[1].get<double>());
  }

  void finish() const {
    for (auto it = doc_.begin(); it != doc_.end(); ++it) {
      bool known = false;
      for (const auto& k : claimed_) {
        if (k == it.key()) {
          known = true;
          break;
        }
      }
      if (!known) {
        throw ValidationError("config: unknown key '" + it.key() + "'");
      }
    }
  }

 private:
  json doc_ = json::object();
  std::vector<std::string> claimed_;
};

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing output file: " + path);
}

std::optional<std::pair<double, double>> parse_window(const std::string& raw) {
  if (raw.empty()) return std::nullopt;
  const auto sep = raw.find_first_of(":,");
  if (sep == std::string::npos) {
    throw ValidationError("window: expected two values separated by ':'");
  }
  try {
    return std::make_pair(std::stod(raw.substr(0, sep)),
                          std::stod(raw.substr(sep + 1)));
  } catch (const std::exception&) {
    throw ValidationError("window: could not parse '" + raw + "'");
  }
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") {
    throw ValidationError("format must be 'csv' or 'json', got '" + format +
                          "'");
  }
}

/// Common key/value report: CSV with '#'-metadata plus a key,value table, or
/// the equivalent JSON object.
struct Report {
  std::string schema;
  std::vector<std::pair<std::string, std::string>> meta;   // echoed config
  std::vector<std::pair<std::string, std::string>> rows;   // key,value pairs
  std::vector<std::string> columns;                        // tabular part
  std::vector<std::vector<std::string>> table;

  void metaItem(const std::string& k, const std::string& v) {
    meta.emplace_back(k, v);
  }
  void row(const std::string& k, double v) { rows.emplace_back(k, fmt(v)); }
  void row(const std::string& k, const std::string& v) {
    rows.emplace_back(k, v);
  }

  std::string csv() const {
    std::ostringstream out;
    out << "#schema=" << schema << "\n";
    for (const auto& [k, v] : meta) out << '#' << k << '=' << v << "\n";
    if (!rows.empty()) {
      out << "key,value\n";
      for (const auto& [k, v] : rows) out << k << ',' << v << "\n";
    }
    if (!columns.empty()) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out << ',';
        out << columns[i];
      }
      out << "\n";
      for (const auto& r : table) {
        for (std::size_t i = 0; i < r.size(); ++i) {
          if (i) out << ',';
          out << r[i];
        }
        out << "\n";
      }
    }
    return out.str();
  }

  std::string jsonText() const {
    json doc;
    doc["schema"] = schema;
    json cfg = json::object();
    for (const auto& [k, v] : meta) cfg[k] = v;
    doc["config"] = cfg;
    if (!rows.empty()) {
      json values = json::object();
      for (const auto& [k, v] : rows) values[k] = v;
      doc["values"] = values;
    }
    if (!columns.empty()) {
      json tab = json::array();
      for (const auto& r : table) {
        json obj = json::object();
        for (std::size_t i = 0; i < r.size() && i < columns.size(); ++i) {
          obj[columns[i]] = r[i];
        }
        tab.push_back(obj);
      }
      doc["table"] = tab;
    }
    return doc.dump(2) + "\n";
  }

  std::string render(const std::string& format) const {
    return format == "json" ? jsonText() : csv();
  }
};

std::string pass_fail(bool ok) { return ok ? "pass" : "fail"; }

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// ---------------------------------------------------------------- subcommands

struct CommonArgs {
  int dim = 2;
  double s = 0.5;
  std::string configPath;
  std::string outputPath;
  std::string format = "csv";
  CLI::Option* dimOpt = nullptr;
  CLI::Option* sOpt = nullptr;
  CLI::Option* outputOpt = nullptr;
  CLI::Option* formatOpt = nullptr;

  void attach(CLI::App* cmd, bool withParams = true) {
    if (withParams) {
      dimOpt = cmd->add_option("--dim", dim, "Ambient dimension N");
      sOpt = cmd->add_option("--s", s, "Fractional order s, 0 < 2s < N");
    }
    cmd->add_option("--config", configPath, "JSON config file (flags win)");
    outputOpt = cmd->add_option("--output", outputPath,
                                "Output path (default: stdout)");
    formatOpt = cmd->add_option("--format", format, "csv or json");
  }

  void merge(ConfigMerge& cfg) {
    cfg.apply("dim", dimOpt, dim);
    cfg.apply("s", sOpt, s);
    cfg.apply("output", outputOpt, outputPath);
    cfg.apply("format", formatOpt, format);
  }
};

int run_constants(const CommonArgs& args) {
  check_format(args.format);
  const fracstab::ProblemParams params(args.dim, args.s);
  const fracstab::ConstantTable table = fracstab::constant_table(params);

  Report rep;
  rep.schema = "fracstab-constants-v1";
  rep.metaItem("N", std::to_string(params.N));
  rep.metaItem("s", fmt(params.s));
  rep.row("p", params.p);
  rep.row("m", params.m);
  rep.row("twoStar", params.twoStar);
  rep.row("sobolev", table.sobolev);
  rep.row("bubbleAmp", table.bubbleAmp);
  rep.row("gamma", table.gamma);
  rep.row("gammaPlus", table.gammaPlus);
  rep.row("kappa1", table.kappa1);
  rep.row("kappa2", table.kappa2);
  rep.row("kappa3", table.kappa3);
  rep.row("kappaFDE", table.kappaFDE);
  for (int k = 0; k <= 6; ++k) {
    rep.row("mu" + std::to_string(k), fracstab::mu(k, params));
  }
  rep.row("check_mu0_equals_1_over_p",
          pass_fail(rel_close(fracstab::mu(0, params), 1.0 / params.p, 1e-13)));
  rep.row("check_gamma_equals_spectral_gap",
          pass_fail(rel_close(
              table.gamma,
              1.0 - fracstab::alpha(1, params) / fracstab::alpha(2, params),
              1e-13)));
  rep.row("check_kappaFDE_translation",
          pass_fail(rel_close(table.kappaFDE,
                              params.p / (params.p - 1.0) * table.kappa3,
                              1e-13)));
  write_output(args.outputPath, rep.render(args.format));
  return 0;
}

int run_spectrum(const CommonArgs& args, int lmax) {
  check_format(args.format);
  if (lmax < 0) throw ValidationError("spectrum: lmax must be >= 0");
  const fracstab::ProblemParams params(args.dim, args.s);

  Report rep;
  rep.schema = "fracstab-spectrum-v1";
  rep.metaItem("N", std::to_string(params.N));
  rep.metaItem("s", fmt(params.s));
  rep.metaItem("lmax", std::to_string(lmax));
  rep.columns = {"k", "alpha", "mu"};
  for (int k = 0; k <= lmax; ++k) {
    rep.table.push_back({std::to_string(k), fmt(fracstab::alpha(k, params)),
                         fmt(fracstab::mu(k, params))});
  }
  write_output(args.outputPath, rep.render(args.format));
  return 0;
}

int run_bubble_check(const CommonArgs& args, int lmax, int gridDegree) {
  check_format(args.format);
  if (lmax < 0) throw ValidationError("bubble-check: lmax must be >= 0");
  const fracstab::ProblemParams params(args.dim, args.s);
  const int degree = gridDegree > 0 ? gridDegree : std::max(4 * lmax, 8);
  const fracstab::QuadratureGrid grid =
      fracstab::build_quadrature(params.N, degree);
  const fracstab::BubbleParams standard(Eigen::VectorXd::Zero(params.N), 1.0);
  const fracstab::SphereField bubble =
      fracstab::bubble_field(standard, grid, lmax, params);

  const fracstab::ResidualReport res =
      fracstab::residual(bubble, params, grid);
  const double hsNormSq = fracstab::hs_norm_sq(bubble, params);
  const double hsNorm = std::sqrt(hsNormSq);
  const double critNorm = fracstab::lp_norm(bubble, params.twoStar, grid);
  const double quotientVal = hsNormSq / (critNorm * critNorm);
  const double sobolev = fracstab::sobolev_constant(params);

  Report rep;
  rep.schema = "fracstab-bubble-check-v1";
  rep.metaItem("N", std::to_string(params.N));
  rep.metaItem("s", fmt(params.s));
  rep.metaItem("lmax", std::to_string(lmax));
  rep.metaItem("gridDegree", std::to_string(degree));
  rep.row("hsNorm", hsNorm);
  rep.row("hnegResidual", res.hnegNorm);
  rep.row("relativeResidual", res.hnegNorm / hsNorm);
  rep.row("deltaNorm", res.deltaNorm);
  rep.row("sobolevQuotient", quotientVal);
  rep.row("sobolevConstant", sobolev);
  rep.row("sobolevRelError", std::abs(quotientVal - sobolev) / sobolev);
  write_output(args.outputPath, rep.render(args.format));
  return 0;
}

int run_coercivity(const CommonArgs& args, int lmax, std::uint64_t seed,
                   int count) {
  check_format(args.format);
  if (lmax < 2) throw ValidationError("coercivity: lmax must be >= 2");
  if (count < 1) throw ValidationError("coercivity: count must be >= 1");
  const fracstab::ProblemParams params(args.dim, args.s);
  const fracstab::ConstantTable table = fracstab::constant_table(params);

  std::vector<int> degrees;
  for (int l = 2; l <= lmax; ++l) degrees.push_back(l);

  Report rep;
  rep.schema = "fracstab-coercivity-v1";
  rep.metaItem("N", std::to_string(params.N));
  rep.metaItem("s", fmt(params.s));
  rep.metaItem("lmax", std::to_string(lmax));
  rep.metaItem("seed", std::to_string(seed));
  rep.metaItem("count", std::to_string(count));
  rep.metaItem("gamma", fmt(table.gamma));
  rep.metaItem("gammaPlus", fmt(table.gammaPlus));
  rep.columns = {"index", "formValue", "slack"};

  double minSlack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    fracstab::SphereField rho =
        fracstab::random_field(params.N, lmax, degrees, seed + i);
    const double norm = std::sqrt(fracstab::hs_norm_sq(rho, params));
    rho = (1.0 / norm) * rho;
    const double form = fracstab::coercivity_form(rho, rho, params);
    const double slack = form - table.gamma;
    minSlack = std::min(minSlack, slack);
    rep.table.push_back({std::to_string(i), fmt(form), fmt(slack)});
  }

  auto pureValue = [&](int l) {
    fracstab::SphereField rho =
        fracstab::random_field(params.N, lmax, {l}, seed);
    const double norm = std::sqrt(fracstab::hs_norm_sq(rho, params));
    rho = (1.0 / norm) * rho;
    return fracstab::coercivity_form(rho, rho, params);
  };
  rep.row("minSlack", minSlack);
  rep.row("pureDegree2", pureValue(2));
  rep.row("pureDegree3", pureValue(3));
  write_output(args.outputPath, rep.render(args.format));
  return 0;
}

int run_quotient(const CommonArgs& args, int lmax, int gridDegree,
                 std::vector<double> epsList, std::uint64_t seed) {
  check_format(args.format);
  if (lmax < 2) throw ValidationError("quotient: lmax must be >= 2");
  if (epsList.size() < 2) {
    throw ValidationError("quotient: need at least two eps values");
  }
  const fracstab::ProblemParams params(args.dim, args.s);
  const fracstab::ConstantTable table = fracstab::constant_table(params);
  const int degree = gridDegree > 0 ? gridDegree : 4 * lmax;
  const fracstab::QuadratureGrid grid =
      fracstab::build_quadrature(params.N, degree);

  const fracstab::BubbleParams standard(Eigen::VectorXd::Zero(params.N), 1.0);
  const fracstab::SphereField bubble =
      fracstab::bubble_field(standard, grid, lmax, params);
  fracstab::SphereField rho =
      fracstab::random_field(params.N, lmax, {2}, seed);
  rho = (1.0 / std::sqrt(fracstab::hs_norm_sq(rho, params))) * rho;

  Report rep;
  rep.schema = "fracstab-quotient-v1";
  rep.metaItem("N", std::to_string(params.N));
  rep.metaItem("s", fmt(params.s));
  rep.metaItem("lmax", std::to_string(lmax));
  rep.metaItem("gridDegree", std::to_string(degree));
  rep.metaItem("seed", std::to_string(seed));
  rep.metaItem("gamma", fmt(table.gamma));
  rep.metaItem("pMinusOne", fmt(params.p - 1.0));
  rep.columns = {"mode", "eps", "quotient", "dist"};

  // Linear extrapolation to eps = 0 from the two smallest eps values.
  auto extrapolate = [](const std::vector<double>& eps,
                        const std::vector<double>& q) {
    std::size_t a = 0, b = 1;
    for (std::size_t i = 1; i < eps.size(); ++i) {
      if (eps[i] < eps[a]) {
        b = a;
        a = i;
      } else if (eps[i] < eps[b] || b == a) {
        b = i;
      }
    }
    return q[a] - eps[a] * (q[b] - q[a]) / (eps[b] - eps[a]);
  };

  std::vector<double> qDeg2, qBeta;
  for (const double eps : epsList) {
    if (!(eps > 0.0)) throw ValidationError("quotient: eps must be > 0");
    const fracstab::SphereField V = bubble + eps * rho;
    const fracstab::QuotientReport qr =
        fracstab::stability_quotient(V, params, grid, eps);
    qDeg2.push_back(qr.quotient);
    rep.table.push_back(
        {"degree2", fmt(eps), fmt(qr.quotient), fmt(qr.distVal)});
  }
  for (const double eps : epsList) {
    const fracstab::SphereField V = (1.0 + eps) * bubble;
    const fracstab::QuotientReport qr =
        fracstab::stability_quotient(V, params, grid, eps);
    qBeta.push_back(qr.quotient);
    rep.table.push_back({"beta", fmt(eps), fmt(qr.quotient), fmt(qr.distVal)});
  }
  rep.row("extrapolatedDegree2", extrapolate(epsList, qDeg2));
  rep.row("extrapolatedBeta", extrapolate(epsList, qBeta));
  write_output(args.outputPath, rep.render(args.format));
  return 0;
}

int run_expansion(const CommonArgs& args, int lmax, int gridDegree,
                  std::vector<double> epsList) {
  check_format(args.format);
  if (lmax < 2) throw ValidationError("expansion: lmax must be >= 2");
  const fracstab::ProblemParams params(args.dim, args.s);
  const fracstab::ConstantTable table = fracstab::constant_table(params);
  const int degree = gridDegree > 0 ? gridDegree : 4 * lmax;
  const fracstab::QuadratureGrid grid =
      fracstab::build_quadrature(params.N, degree);

  const fracstab::SphereField rho =
      fracstab::strictness_test_field(params, grid, lmax);
  const fracstab::ExpansionReport er =
      fracstab::expansion_experiment(rho, epsList, params, grid);

  Report rep;
  rep.schema = "fracstab-expansion-v1";
  rep.metaItem("N", std::to_string(params.N));
  rep.metaItem("s", fmt(params.s));
  rep.metaItem("lmax", std::to_string(lmax));
  rep.metaItem("gridDegree", std::to_string(degree));
  {
    std::ostringstream eps;
    for (std::size_t i = 0; i < epsList.size(); ++i) {
      if (i) eps << ' ';
      eps << fmt(epsList[i]);
    }
    rep.metaItem("eps", eps.str());
  }
  rep.row("gammaSquared", table.gamma * table.gamma);
  rep.row("quadraticTerm", er.quadraticTerm);
  rep.row("cubicCoefficient", er.cubicCoefficient);
  rep.row("predictedCubic", er.predictedCubic);
  rep.row("cubicRelError",
          std::abs(er.cubicCoefficient - er.predictedCubic) /
              std::abs(er.predictedCubic));
  rep.row("momentIntegral", er.momentIntegral);
  write_output(args.outputPath, rep.render(args.format));
  return 0;
}

struct SimulateArgs {
  int lmax = 16;
  int gridDegree = 0;
  double eps = 1e-3;
  double tauEnd = 10.0;
  double dtSafety = 0.5;
  double fixedDt = 0.0;
  std::uint64_t seed = 1;
  std::vector<int> degrees{2};
  std::string control = "projectOut";
  double sampleInterval = 0.1;
};

int run_simulate(const CommonArgs& args, const SimulateArgs& sim) {
  check_format(args.format);
  const fracstab::ProblemParams params(args.dim, args.s);
  fracstab::SimConfig config(params);
  config.Lmax = sim.lmax;
  config.gridDegreeBound = sim.gridDegree;
  config.dtPolicy.safety = sim.dtSafety;
  config.dtPolicy.fixedDt = sim.fixedDt;
  config.tauEnd = sim.tauEnd;
  config.initSpec.degrees = sim.degrees;
  config.initSpec.amplitude = sim.eps;
  config.initSpec.seed = sim.seed;
  config.sampleInterval = sim.sampleInterval;
  if (sim.control == "projectOut") {
    config.unstableModeControl = fracstab::UnstableModeControl::projectOut;
  } else if (sim.control == "none") {
    config.unstableModeControl = fracstab::UnstableModeControl::none;
  } else {
    throw ValidationError("control must be 'projectOut' or 'none', got '" +
                          sim.control + "'");
  }

  const fracstab::SimTrace trace = fracstab::simulate(config);
  std::ostringstream out;
  if (args.format == "json") {
    fracstab::write_trace_json(trace, out);
  } else {
    fracstab::write_trace_csv(trace, out);
  }
  write_output(args.outputPath, out.str());
  return 0;
}

int run_rate(const CommonArgs& args, const std::string& tracePath,
             const std::string& metricName,
             std::optional<std::pair<double, double>> window) {
  check_format(args.format);
  std::ifstream in(tracePath);
  if (!in) throw IoError("cannot read trace file: " + tracePath);
  const fracstab::SimTrace trace = fracstab::read_trace_csv(in);
  const fracstab::RateMetric metric = fracstab::parse_metric(metricName);
  const fracstab::RateFit fit = fracstab::rate_fit(trace, metric, window);
  const fracstab::ProblemParams params(trace.N, trace.s);

  Report rep;
  rep.schema = "fracstab-rate-v1";
  rep.metaItem("trace", tracePath);
  rep.metaItem("N", std::to_string(trace.N));
  rep.metaItem("s", fmt(trace.s));
  rep.metaItem("metric", metricName);
  rep.row("kappaHat", fit.kappaHat);
  rep.row("windowLo", fit.window.first);
  rep.row("windowHi", fit.window.second);
  rep.row("rmsResidual", fit.rmsResidual);
  rep.row("mu2minus1", fit.comparisons.mu2minus1);
  rep.row("kappa2", fit.comparisons.kappa2);
  rep.row("kappa3", fit.comparisons.kappa3);
  rep.row("kappaFDE", fit.comparisons.kappaFDE);
  // Time-map translation: exponent kappa in tau corresponds to the power
  // kappa * p/(p-1) of (Tbar - t) in the original time variable.
  rep.row("kappaOriginalPower",
          fit.kappaHat * params.p / (params.p - 1.0));
  write_output(args.outputPath, rep.render(args.format));
  return 0;
}

int run_interp(const CommonArgs& args, std::vector<double> deltas,
               double lipschitz) {
  check_format(args.format);
  const fracstab::ProblemParams params(args.dim, args.s);
  const std::vector<fracstab::CapFamilyEntry> entries =
      fracstab::cap_family_study(params, lipschitz, deltas);

  Report rep;
  rep.schema = "fracstab-interp-v1";
  rep.metaItem("N", std::to_string(params.N));
  rep.metaItem("s", fmt(params.s));
  rep.metaItem("lipschitz", fmt(lipschitz));
  rep.columns = {"delta", "supNorm", "lpNorm", "ratio"};
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& e : entries) {
    rep.table.push_back(
        {fmt(e.delta), fmt(e.supNorm), fmt(e.lpNorm), fmt(e.ratio)});
    lo = std::min(lo, e.ratio);
    hi = std::max(hi, e.ratio);
  }
  rep.row("ratioDrift", entries.empty() ? 0.0 : hi / lo - 1.0);
  write_output(args.outputPath, rep.render(args.format));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fracstab: spectral experiments for the stability theory of the "
      "fractional Sobolev inequality and the fast-diffusion flow on S^N"};
  app.require_subcommand(1);

  // constants ---------------------------------------------------------------
  auto* cmdConstants = app.add_subcommand(
      "constants", "Closed-form constant table with identity checks");
  CommonArgs constantsArgs;
  constantsArgs.attach(cmdConstants);

  // spectrum ----------------------------------------------------------------
  auto* cmdSpectrum =
      app.add_subcommand("spectrum", "alpha(k) / mu(k) eigenvalue table");
  CommonArgs spectrumArgs;
  spectrumArgs.attach(cmdSpectrum);
  int spectrumLmax = 8;
  auto* spectrumLmaxOpt =
      cmdSpectrum->add_option("--lmax", spectrumLmax, "Largest degree");

  // bubble-check ------------------------------------------------------------
  auto* cmdBubble = app.add_subcommand(
      "bubble-check", "Residual and Sobolev quotient of the standard bubble");
  CommonArgs bubbleArgs;
  bubbleArgs.attach(cmdBubble);
  int bubbleLmax = 32, bubbleGrid = 0;
  auto* bubbleLmaxOpt =
      cmdBubble->add_option("--lmax", bubbleLmax, "Band limit");
  auto* bubbleGridOpt = cmdBubble->add_option(
      "--grid-degree", bubbleGrid, "Quadrature exactness degree (0 = auto)");

  // coercivity --------------------------------------------------------------
  auto* cmdCoercivity = app.add_subcommand(
      "coercivity", "Spectral-gap audit over seeded random fields");
  CommonArgs coercivityArgs;
  coercivityArgs.attach(cmdCoercivity);
  int coercivityLmax = 16, coercivityCount = 200;
  std::uint64_t coercivitySeed = 1;
  auto* coercivityLmaxOpt =
      cmdCoercivity->add_option("--lmax", coercivityLmax, "Band limit");
  auto* coercivitySeedOpt =
      cmdCoercivity->add_option("--seed", coercivitySeed, "Base RNG seed");
  auto* coercivityCountOpt = cmdCoercivity->add_option(
      "--count", coercivityCount, "Number of random fields");

  // quotient ----------------------------------------------------------------
  auto* cmdQuotient = app.add_subcommand(
      "quotient", "Stability-quotient sequences along eps -> 0");
  CommonArgs quotientArgs;
  quotientArgs.attach(cmdQuotient);
  int quotientLmax = 16, quotientGrid = 0;
  std::uint64_t quotientSeed = 1;
  std::vector<double> quotientEps{0.04, 0.02, 0.01};
  auto* quotientLmaxOpt =
      cmdQuotient->add_option("--lmax", quotientLmax, "Band limit");
  auto* quotientGridOpt = cmdQuotient->add_option(
      "--grid-degree", quotientGrid, "Quadrature exactness degree (0 = auto)");
  auto* quotientEpsOpt =
      cmdQuotient->add_option("--eps", quotientEps, "Perturbation sizes")
          ->delimiter(',');
  auto* quotientSeedOpt =
      cmdQuotient->add_option("--seed", quotientSeed, "RNG seed");

  // expansion ---------------------------------------------------------------
  auto* cmdExpansion = app.add_subcommand(
      "expansion", "Third-order strictness expansion of the squared quotient");
  CommonArgs expansionArgs;
  expansionArgs.attach(cmdExpansion);
  int expansionLmax = 16, expansionGrid = 0;
  std::vector<double> expansionEps{0.05, 0.025, 0.0125};
  auto* expansionLmaxOpt =
      cmdExpansion->add_option("--lmax", expansionLmax, "Band limit");
  auto* expansionGridOpt = cmdExpansion->add_option(
      "--grid-degree", expansionGrid,
      "Quadrature exactness degree (0 = auto)");
  auto* expansionEpsOpt =
      cmdExpansion->add_option("--eps", expansionEps, "Perturbation sizes")
          ->delimiter(',');

  // simulate ----------------------------------------------------------------
  auto* cmdSimulate = app.add_subcommand(
      "simulate", "Rescaled fast-diffusion flow trace on S^N");
  CommonArgs simulateArgs;
  simulateArgs.attach(cmdSimulate);
  SimulateArgs sim;
  auto* simLmaxOpt = cmdSimulate->add_option("--lmax", sim.lmax, "Band limit");
  auto* simGridOpt = cmdSimulate->add_option(
      "--grid-degree", sim.gridDegree, "Quadrature exactness degree (0 = auto)");
  auto* simEpsOpt = cmdSimulate->add_option(
      "--eps", sim.eps, "Initial perturbation amplitude in Hs");
  auto* simTauEndOpt =
      cmdSimulate->add_option("--tau-end", sim.tauEnd, "Final flow time");
  auto* simSafetyOpt = cmdSimulate->add_option(
      "--dt-safety", sim.dtSafety, "Adaptive step safety factor");
  auto* simFixedDtOpt = cmdSimulate->add_option(
      "--fixed-dt", sim.fixedDt, "Fixed step size (0 = adaptive)");
  auto* simSeedOpt = cmdSimulate->add_option("--seed", sim.seed, "RNG seed");
  auto* simDegreesOpt =
      cmdSimulate->add_option("--degrees", sim.degrees, "Perturbed degrees")
          ->delimiter(',');
  auto* simControlOpt = cmdSimulate->add_option(
      "--control", sim.control, "Unstable-mode control: projectOut or none");
  auto* simSampleOpt = cmdSimulate->add_option(
      "--sample-interval", sim.sampleInterval, "Trace sampling interval");

  // rate --------------------------------------------------------------------
  auto* cmdRate = app.add_subcommand(
      "rate", "Log-linear decay-rate fit on an existing trace CSV");
  CommonArgs rateArgs;
  rateArgs.attach(cmdRate, /*withParams=*/false);
  std::string ratePath, rateMetric = "hsError", rateWindowRaw;
  cmdRate->add_option("trace", ratePath, "Trace CSV produced by simulate")
      ->required();
  auto* rateMetricOpt = cmdRate->add_option(
      "--metric", rateMetric, "Metric: hsError, dist, or Jgap");
  auto* rateWindowOpt = cmdRate->add_option(
      "--window", rateWindowRaw, "Fit window 'lo:hi' in tau");

  // interp ------------------------------------------------------------------
  auto* cmdInterp = app.add_subcommand(
      "interp", "Geodesic-cap interpolation-constant family study");
  CommonArgs interpArgs;
  interpArgs.attach(cmdInterp);
  std::vector<double> interpDeltas{0.1, 0.05, 0.01};
  double interpLipschitz = 1.0;
  auto* interpEpsOpt =
      cmdInterp->add_option("--eps", interpDeltas, "Cap sup-values delta")
          ->delimiter(',');
  auto* interpLipOpt = cmdInterp->add_option(
      "--lipschitz", interpLipschitz, "Lipschitz constant of the family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmdConstants->parsed()) {
      ConfigMerge cfg(constantsArgs.configPath);
      constantsArgs.merge(cfg);
      cfg.finish();
      return run_constants(constantsArgs);
    }
    if (cmdSpectrum->parsed()) {
      ConfigMerge cfg(spectrumArgs.configPath);
      spectrumArgs.merge(cfg);
      cfg.apply("lmax", spectrumLmaxOpt, spectrumLmax);
      cfg.finish();
      return run_spectrum(spectrumArgs, spectrumLmax);
    }
    if (cmdBubble->parsed()) {
      ConfigMerge cfg(bubbleArgs.configPath);
      bubbleArgs.merge(cfg);
      cfg.apply("lmax", bubbleLmaxOpt, bubbleLmax);
      cfg.apply("gridDegree", bubbleGridOpt, bubbleGrid);
      cfg.finish();
      return run_bubble_check(bubbleArgs, bubbleLmax, bubbleGrid);
    }
    if (cmdCoercivity->parsed()) {
      ConfigMerge cfg(coercivityArgs.configPath);
      coercivityArgs.merge(cfg);
      cfg.apply("lmax", coercivityLmaxOpt, coercivityLmax);
      cfg.apply("seed", coercivitySeedOpt, coercivitySeed);
      cfg.apply("count", coercivityCountOpt, coercivityCount);
      cfg.finish();
      return run_coercivity(coercivityArgs, coercivityLmax, coercivitySeed,
                            coercivityCount);
    }
    if (cmdQuotient->parsed()) {
      ConfigMerge cfg(quotientArgs.configPath);
      quotientArgs.merge(cfg);
      cfg.apply("lmax", quotientLmaxOpt, quotientLmax);
      cfg.apply("gridDegree", quotientGridOpt, quotientGrid);
      cfg.apply("eps", quotientEpsOpt, quotientEps);
      cfg.apply("seed", quotientSeedOpt, quotientSeed);
      cfg.finish();
      return run_quotient(quotientArgs, quotientLmax, quotientGrid,
                          quotientEps, quotientSeed);
    }
    if (cmdExpansion->parsed()) {
      ConfigMerge cfg(expansionArgs.configPath);
      expansionArgs.merge(cfg);
      cfg.apply("lmax", expansionLmaxOpt, expansionLmax);
      cfg.apply("gridDegree", expansionGridOpt, expansionGrid);
      cfg.apply("eps", expansionEpsOpt, expansionEps);
      cfg.finish();
      return run_expansion(expansionArgs, expansionLmax, expansionGrid,
                           expansionEps);
    }
    if (cmdSimulate->parsed()) {
      ConfigMerge cfg(simulateArgs.configPath);
      simulateArgs.merge(cfg);
      cfg.apply("lmax", simLmaxOpt, sim.lmax);
      cfg.apply("gridDegree", simGridOpt, sim.gridDegree);
      cfg.apply("eps", simEpsOpt, sim.eps);
      cfg.apply("tauEnd", simTauEndOpt, sim.tauEnd);
      cfg.apply("dtSafety", simSafetyOpt, sim.dtSafety);
      cfg.apply("fixedDt", simFixedDtOpt, sim.fixedDt);
      cfg.apply("seed", simSeedOpt, sim.seed);
      cfg.apply("degrees", simDegreesOpt, sim.degrees);
      cfg.apply("control", simControlOpt, sim.control);
      cfg.apply("sampleInterval", simSampleOpt, sim.sampleInterval);
      cfg.finish();
      return run_simulate(simulateArgs, sim);
    }
    if (cmdRate->parsed()) {
      ConfigMerge cfg(rateArgs.configPath);
      rateArgs.merge(cfg);
      cfg.apply("metric", rateMetricOpt, rateMetric);
      std::optional<std::pair<double, double>> window =
          parse_window(rateWindowRaw);
      cfg.applyWindow("window", rateWindowOpt, window);
      cfg.finish();
      return run_rate(rateArgs, ratePath, rateMetric, window);
    }
    if (cmdInterp->parsed()) {
      ConfigMerge cfg(interpArgs.configPath);
      interpArgs.merge(cfg);
      cfg.apply("eps", interpEpsOpt, interpDeltas);
      cfg.apply("lipschitz", interpLipOpt, interpLipschitz);
      cfg.finish();
      return run_interp(interpArgs, interpDeltas, interpLipschitz);
    }
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fracstab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
