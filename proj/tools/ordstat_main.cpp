// ordstat command line front end. Talks to the library exclusively through
// the C API in ordstat.h; writes CSV tables (plus JSON manifests) that are
// byte-identical for a given seed and configuration.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ordstat.h"

namespace {

using nlohmann::json;

class cli_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(ordstat_status status, const std::string& what) {
  if (status != ORDSTAT_OK) {
    throw cli_error(what + ": " + ordstat_status_message(status));
  }
}

// Locale-independent decimal formatting, 12 significant digits.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

// "0.5,1,2" or "start:step:stop" (inclusive).
std::vector<double> parse_sigma_spec(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double start, step, stop;
    char c1, c2;
    std::istringstream in(spec);
    if (!(in >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || step <= 0.0) {
      throw CLI::ValidationError("--sigma", "expected start:step:stop with step > 0");
    }
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) out.push_back(start + i * step);
  } else {
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (tok.empty()) continue;
      try {
        size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        out.push_back(v);
      } catch (const std::exception&) {
        throw CLI::ValidationError("--sigma", "bad number '" + tok + "'");
      }
    }
  }
  if (out.empty()) throw CLI::ValidationError("--sigma", "no values given");
  for (double s : out) {
    if (!(s >= 0.0)) throw CLI::ValidationError("--sigma", "sigma must be >= 0");
  }
  return out;
}

struct OwnedModel {
  ordstat_model* ptr = nullptr;
  ~OwnedModel() { ordstat_model_destroy(ptr); }
};

struct OwnedIntegrator {
  ordstat_integrator* ptr = nullptr;
  ~OwnedIntegrator() { ordstat_integrator_destroy(ptr); }
};

OwnedIntegrator make_integrator(int n, int inner, std::uint64_t seed) {
  OwnedIntegrator integ;
  if (n == 2) {
    check(ordstat_integrator_create_exact_n2(seed, &integ.ptr), "integrator");
  } else {
    check(ordstat_integrator_create_monte_carlo(inner, seed, &integ.ptr), "integrator");
  }
  return integ;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cli_error("cannot open output file " + path);
  out << text;
}

struct ManifestInfo {
  std::string command;
  json config;
  std::uint64_t seed = 0;
  double duration_seconds = 0.0;
};

json manifest_json(const ManifestInfo& info) {
  return json{{"command", info.command},
              {"config", info.config},
              {"seed", info.seed},
              {"library_version", ordstat_version()},
              {"duration_seconds", info.duration_seconds}};
}

void write_manifest(const ManifestInfo& info, const std::string& manifest_path,
                    const std::string& out_path) {
  std::string path = manifest_path;
  if (path.empty() && !out_path.empty() && out_path != "-") {
    path = out_path + ".manifest.json";
  }
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cli_error("cannot open manifest file " + path);
  out << manifest_json(info).dump(2) << "\n";
}

// ---------------------------------------------------------------- sweep ---

struct SweepArgs {
  int n = 2;
  std::vector<double> sigmas;
  std::int64_t outer = 100000;
  int inner = 4096;
  std::uint64_t seed = 0;
  std::vector<std::string> estimators{"optimal", "fhat", "hhat", "mle"};
  // Default policy: MLE only up to this sigma. NaN disables the cap
  // (set when --estimators is passed explicitly).
  double mle_sigma_cap = 2.0;
  int chunks = 8;
};

const std::vector<std::pair<std::string, ordstat_estimator_kind>> kSweepColumns = {
    {"optimal", ORDSTAT_EST_OPTIMAL},
    {"fhat", ORDSTAT_EST_FHAT},
    {"hhat", ORDSTAT_EST_HHAT},
    {"mle", ORDSTAT_EST_MLE},
};

ordstat_estimator_kind kind_from_name(const std::string& name) {
  for (const auto& [col, kind] : kSweepColumns) {
    if (col == name) return kind;
  }
  throw cli_error("unknown estimator '" + name + "' (expected optimal,fhat,hhat,mle)");
}

json sweep_config_json(const SweepArgs& a) {
  return json{{"n", a.n},
              {"sigma", a.sigmas},
              {"outer", a.outer},
              {"inner", a.inner},
              {"seed", a.seed},
              {"estimators", a.estimators},
              {"mle_sigma_cap", std::isnan(a.mle_sigma_cap) ? json(nullptr) : json(a.mle_sigma_cap)},
              {"chunks", a.chunks}};
}

SweepArgs sweep_args_from_json(const json& j) {
  SweepArgs a;
  a.n = j.at("n").get<int>();
  a.sigmas = j.at("sigma").get<std::vector<double>>();
  a.outer = j.at("outer").get<std::int64_t>();
  a.inner = j.at("inner").get<int>();
  a.seed = j.at("seed").get<std::uint64_t>();
  a.estimators = j.at("estimators").get<std::vector<std::string>>();
  a.mle_sigma_cap =
      j.at("mle_sigma_cap").is_null() ? std::nan("") : j.at("mle_sigma_cap").get<double>();
  a.chunks = j.at("chunks").get<int>();
  return a;
}

std::string run_sweep_csv(const SweepArgs& args) {
  ordstat_eval_config cfg;
  ordstat_eval_defaults(&cfg);
  cfg.outer_samples = args.outer;
  cfg.chunks = args.chunks;
  cfg.seed = args.seed;

  std::ostringstream csv;
  csv << "sigma,mse_optimal,se_optimal,mse_fhat,se_fhat,mse_hhat,se_hhat,"
         "mse_mle,se_mle,var_sorted,mmse_unsorted\n";

  for (double sigma : args.sigmas) {
    std::vector<ordstat_estimator_kind> kinds;
    for (const auto& name : args.estimators) {
      const ordstat_estimator_kind kind = kind_from_name(name);
      if (kind == ORDSTAT_EST_MLE && !std::isnan(args.mle_sigma_cap) &&
          sigma > args.mle_sigma_cap) {
        continue;
      }
      kinds.push_back(kind);
    }
    if (kinds.empty()) throw cli_error("no estimators requested for sigma " + fmt(sigma));

    const auto integ = make_integrator(args.n, args.inner, args.seed);
    ordstat_sweep_table* table = nullptr;
    check(ordstat_sweep_run(args.n, &sigma, 1, kinds.data(), static_cast<int32_t>(kinds.size()),
                            integ.ptr, &cfg, &table),
          "sweep");

    double row_sigma = 0, vs = 0, unsorted = 0;
    check(ordstat_sweep_row_refs(table, 0, &row_sigma, &vs, &unsorted), "sweep row");
    csv << fmt(row_sigma);
    for (const auto& [name, kind] : kSweepColumns) {
      ordstat_mc_result r;
      if (ordstat_sweep_get(table, 0, kind, &r) == ORDSTAT_OK) {
        csv << "," << fmt(r.mean) << "," << fmt(r.std_error);
      } else {
        csv << ",,";
      }
    }
    csv << "," << fmt(vs) << "," << fmt(unsorted) << "\n";
    ordstat_sweep_destroy(table);
  }
  return csv.str();
}

// ------------------------------------------------------------- varratio ---

struct VarRatioArgs {
  int n_max = 30;
  int quad = 0;
};

json varratio_config_json(const VarRatioArgs& a) {
  return json{{"n_max", a.n_max}, {"quad", a.quad}};
}

VarRatioArgs varratio_args_from_json(const json& j) {
  VarRatioArgs a;
  a.n_max = j.at("n_max").get<int>();
  a.quad = j.at("quad").get<int>();
  return a;
}

std::string run_varratio_csv(const VarRatioArgs& args) {
  std::ostringstream csv;
  csv << "n,var_sorted,var_ratio\n";
  for (int n = 1; n <= args.n_max; ++n) {
    double v = 0;
    check(ordstat_var_sorted(n, args.quad, &v), "var_sorted");
    csv << n << "," << fmt(v) << "," << fmt(v / n) << "\n";
  }
  return csv.str();
}

// ---------------------------------------------------------------- delta ---

struct DeltaArgs {
  int n = 2;
  std::vector<double> sigmas;
  std::int64_t outer = 100000;
  int inner = 4096;
  std::uint64_t seed = 0;
  int chunks = 8;
};

json delta_config_json(const DeltaArgs& a) {
  return json{{"n", a.n},     {"sigma", a.sigmas}, {"outer", a.outer},
              {"inner", a.inner}, {"seed", a.seed},    {"chunks", a.chunks}};
}

DeltaArgs delta_args_from_json(const json& j) {
  DeltaArgs a;
  a.n = j.at("n").get<int>();
  a.sigmas = j.at("sigma").get<std::vector<double>>();
  a.outer = j.at("outer").get<std::int64_t>();
  a.inner = j.at("inner").get<int>();
  a.seed = j.at("seed").get<std::uint64_t>();
  a.chunks = j.at("chunks").get<int>();
  return a;
}

std::string run_delta_csv(const DeltaArgs& args) {
  ordstat_eval_config cfg;
  ordstat_eval_defaults(&cfg);
  cfg.outer_samples = args.outer;
  cfg.chunks = args.chunks;
  cfg.seed = args.seed;

  double asymptote = 0;
  check(ordstat_delta_up_asymptote(args.n, &asymptote), "asymptote");

  std::ostringstream csv;
  csv << "sigma,delta_up,se,asymptote\n";
  for (double sigma : args.sigmas) {
    OwnedModel model;
    check(ordstat_model_create(args.n, sigma, &model.ptr), "model");
    const auto integ = make_integrator(args.n, args.inner, args.seed);
    ordstat_mc_result r;
    check(ordstat_delta_up(model.ptr, integ.ptr, &cfg, &r), "delta_up");
    csv << fmt(sigma) << "," << fmt(r.mean) << "," << fmt(r.std_error) << "," << fmt(asymptote)
        << "\n";
  }
  return csv.str();
}

// --------------------------------------------------------------- bounds ---

struct BoundsArgs {
  int n_max = 30;
  std::vector<double> eps;
  int quad = 0;
};

json bounds_config_json(const BoundsArgs& a) {
  return json{{"n_max", a.n_max}, {"eps", a.eps}, {"quad", a.quad}};
}

BoundsArgs bounds_args_from_json(const json& j) {
  BoundsArgs a;
  a.n_max = j.at("n_max").get<int>();
  a.eps = j.at("eps").get<std::vector<double>>();
  a.quad = j.at("quad").get<int>();
  return a;
}

std::string run_bounds_csv(const BoundsArgs& args) {
  std::ostringstream csv;
  csv << "n,var_sorted,var_approx,var_approx_error_bound,chi_variance,"
         "max_entropy_var_bound,sorted_entropy";
  for (double e : args.eps) csv << ",powsum_bound_eps" << fmt(e);
  csv << "\n";

  for (int n = 1; n <= args.n_max; ++n) {
    double vs = 0, va = 0, chi = 0, meb = 0, ent = 0;
    check(ordstat_var_sorted(n, args.quad, &vs), "var_sorted");
    check(ordstat_var_approx(n, &va), "var_approx");
    check(ordstat_chi_variance(n, &chi), "chi_variance");
    check(ordstat_max_entropy_var_bound(n, &meb), "max_entropy_var_bound");
    check(ordstat_sorted_entropy(n, &ent), "sorted_entropy");
    csv << n << "," << fmt(vs) << "," << fmt(va) << ",";
    if (n >= 2) {
      double vab = 0;
      check(ordstat_var_approx_error_bound(n, &vab), "var_approx_error_bound");
      csv << fmt(vab);
    }
    csv << "," << fmt(chi) << "," << fmt(meb) << "," << fmt(ent);
    for (double e : args.eps) {
      double b = 0;
      check(ordstat_quantile_power_sum_bound(n, e, &b), "quantile_power_sum_bound");
      csv << "," << fmt(b);
    }
    csv << "\n";
  }
  return csv.str();
}

// ----------------------------------------------------------- regularity ---

struct RegularityArgs {
  std::int64_t outer = 400000;
  std::uint64_t seed = 0;
  int chunks = 8;
  bool quadrature = false;
};

json regularity_config_json(const RegularityArgs& a) {
  return json{
      {"outer", a.outer}, {"seed", a.seed}, {"chunks", a.chunks}, {"quadrature", a.quadrature}};
}

RegularityArgs regularity_args_from_json(const json& j) {
  RegularityArgs a;
  a.outer = j.at("outer").get<std::int64_t>();
  a.seed = j.at("seed").get<std::uint64_t>();
  a.chunks = j.at("chunks").get<int>();
  a.quadrature = j.at("quadrature").get<bool>();
  return a;
}

json run_regularity_results(const RegularityArgs& args) {
  OwnedModel model;
  check(ordstat_model_create(2, 1.0, &model.ptr), "model");

  double comps[2] = {0, 0};
  double ses[2] = {0, 0};
  if (args.quadrature) {
    check(ordstat_regularity_check_quadrature(model.ptr, comps), "regularity quadrature");
  } else {
    ordstat_eval_config cfg;
    ordstat_eval_defaults(&cfg);
    cfg.outer_samples = args.outer;
    cfg.chunks = args.chunks;
    cfg.seed = args.seed;
    check(ordstat_regularity_check(model.ptr, &cfg, comps, ses), "regularity");
  }

  const double expected = 2.0 / std::sqrt(2.0 * std::acos(-1.0));
  const double dev =
      std::max(std::abs(comps[0] - expected), std::abs(comps[1] + expected));
  bool violated;
  if (args.quadrature) {
    violated = std::max(std::abs(comps[0]), std::abs(comps[1])) > 1e-6;
  } else {
    violated = std::abs(comps[0]) > 5.0 * ses[0] && std::abs(comps[1]) > 5.0 * ses[1];
  }

  return json{{"components", {comps[0], comps[1]}},
              {"std_errors", {ses[0], ses[1]}},
              {"expected", {expected, -expected}},
              {"max_deviation_from_expected", dev},
              {"component_sum", comps[0] + comps[1]},
              {"method", args.quadrature ? "quadrature" : "monte_carlo"},
              {"regularity_violated", violated}};
}

// ---------------------------------------------------------------- main ----

struct CommonOut {
  std::string out_path;
  std::string manifest_path;
};

void add_common_out(CLI::App* cmd, CommonOut& out) {
  cmd->add_option("--out", out.out_path, "Output path (default: stdout)");
  cmd->add_option("--manifest", out.manifest_path,
                  "Manifest path (default: <out>.manifest.json when --out is set)");
}

int dispatch(const std::string& command, const json& config, const CommonOut& io) {
  const auto start = std::chrono::steady_clock::now();
  ManifestInfo info;
  info.command = command;
  info.config = config;
  info.seed = config.contains("seed") ? config.at("seed").get<std::uint64_t>() : 0;

  std::string payload;
  json regularity_results;
  if (command == "sweep") {
    payload = run_sweep_csv(sweep_args_from_json(config));
  } else if (command == "varratio") {
    payload = run_varratio_csv(varratio_args_from_json(config));
  } else if (command == "delta") {
    payload = run_delta_csv(delta_args_from_json(config));
  } else if (command == "bounds") {
    payload = run_bounds_csv(bounds_args_from_json(config));
  } else if (command == "regularity") {
    regularity_results = run_regularity_results(regularity_args_from_json(config));
  } else {
    throw cli_error("unknown command in manifest: " + command);
  }

  info.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (command == "regularity") {
    payload = json{{"command", "regularity"},
                   {"config", config},
                   {"results", regularity_results},
                   {"manifest", manifest_json(info)}}
                  .dump(2) +
              "\n";
  }
  write_text(io.out_path, payload);
  write_manifest(info, io.manifest_path, io.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ordstat: estimators and bounds for sorted noisy data"};
  app.require_subcommand(1);

  // sweep
  SweepArgs sweep;
  std::string sweep_sigma_spec = "0.25:0.25:2";
  bool sweep_estimators_explicit = false;
  CommonOut sweep_io;
  auto* sweep_cmd = app.add_subcommand("sweep", "Estimator MSE table over a sigma grid");
  sweep_cmd->add_option("--n", sweep.n, "Vector dimension")->check(CLI::Range(1, 8));
  sweep_cmd->add_option("--sigma", sweep_sigma_spec, "Comma list or start:step:stop");
  sweep_cmd->add_option("--outer", sweep.outer, "Outer Monte Carlo samples")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--inner", sweep.inner, "Inner posterior samples (n != 2)")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sweep.seed, "RNG seed");
  sweep_cmd->add_option("--chunks", sweep.chunks, "Sample chunks")->check(CLI::PositiveNumber);
  auto* est_opt = sweep_cmd->add_option(
      "--estimators", sweep.estimators,
      "Comma list from optimal,fhat,hhat,mle (explicit list disables the MLE sigma cap)");
  est_opt->delimiter(',');
  add_common_out(sweep_cmd, sweep_io);

  // varratio
  VarRatioArgs varratio;
  CommonOut varratio_io;
  auto* varratio_cmd = app.add_subcommand("varratio", "var_sorted(n)/n table");
  varratio_cmd->add_option("--nmax", varratio.n_max, "Largest n")->check(CLI::Range(1, 1000));
  varratio_cmd->add_option("--quad", varratio.quad, "Quadrature points (0 = default)");
  add_common_out(varratio_cmd, varratio_io);

  // delta
  DeltaArgs delta;
  std::string delta_sigma_spec = "0.25:0.25:2";
  CommonOut delta_io;
  auto* delta_cmd = app.add_subcommand("delta", "Upper bound on fhat's excess MSE");
  delta_cmd->add_option("--n", delta.n, "Vector dimension")->check(CLI::Range(1, 8));
  delta_cmd->add_option("--sigma", delta_sigma_spec, "Comma list or start:step:stop");
  delta_cmd->add_option("--outer", delta.outer, "Outer Monte Carlo samples")
      ->check(CLI::PositiveNumber);
  delta_cmd->add_option("--inner", delta.inner, "Inner posterior samples (n != 2)")
      ->check(CLI::PositiveNumber);
  delta_cmd->add_option("--seed", delta.seed, "RNG seed");
  delta_cmd->add_option("--chunks", delta.chunks, "Sample chunks")->check(CLI::PositiveNumber);
  add_common_out(delta_cmd, delta_io);

  // bounds
  BoundsArgs bounds;
  CommonOut bounds_io;
  auto* bounds_cmd = app.add_subcommand("bounds", "Moment and entropy bound table");
  bounds_cmd->add_option("--nmax", bounds.n_max, "Largest n")->check(CLI::Range(1, 1000));
  bounds_cmd->add_option("--eps", bounds.eps, "Power-sum bound exponents")->delimiter(',');
  bounds_cmd->add_option("--quad", bounds.quad, "Quadrature points (0 = default)");
  add_common_out(bounds_cmd, bounds_io);

  // regularity
  RegularityArgs regularity;
  CommonOut regularity_io;
  auto* regularity_cmd =
      app.add_subcommand("regularity", "Conditional score mean for n=2, sigma=1");
  regularity_cmd->add_option("--outer", regularity.outer, "Monte Carlo samples")
      ->check(CLI::PositiveNumber);
  regularity_cmd->add_option("--seed", regularity.seed, "RNG seed");
  regularity_cmd->add_option("--chunks", regularity.chunks, "Sample chunks")
      ->check(CLI::PositiveNumber);
  regularity_cmd->add_flag("--quadrature", regularity.quadrature,
                           "Use direct quadrature instead of Monte Carlo");
  add_common_out(regularity_cmd, regularity_io);

  // replay
  std::string replay_manifest;
  CommonOut replay_io;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run a recorded manifest");
  replay_cmd->add_option("--manifest-in", replay_manifest, "Manifest to replay")->required();
  add_common_out(replay_cmd, replay_io);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sweep_cmd->parsed()) {
      sweep.sigmas = parse_sigma_spec(sweep_sigma_spec);
      sweep_estimators_explicit = est_opt->count() > 0;
      if (sweep_estimators_explicit) sweep.mle_sigma_cap = std::nan("");
      for (const auto& name : sweep.estimators) {
        try {
          kind_from_name(name);
        } catch (const std::exception&) {
          throw CLI::ValidationError("--estimators", "unknown estimator '" + name + "'");
        }
      }
      return dispatch("sweep", sweep_config_json(sweep), sweep_io);
    }
    if (varratio_cmd->parsed()) {
      return dispatch("varratio", varratio_config_json(varratio), varratio_io);
    }
    if (delta_cmd->parsed()) {
      delta.sigmas = parse_sigma_spec(delta_sigma_spec);
      return dispatch("delta", delta_config_json(delta), delta_io);
    }
    if (bounds_cmd->parsed()) {
      return dispatch("bounds", bounds_config_json(bounds), bounds_io);
    }
    if (regularity_cmd->parsed()) {
      return dispatch("regularity", regularity_config_json(regularity), regularity_io);
    }
    if (replay_cmd->parsed()) {
      std::ifstream in(replay_manifest);
      if (!in) throw cli_error("cannot open manifest " + replay_manifest);
      const json manifest = json::parse(in);
      return dispatch(manifest.at("command").get<std::string>(), manifest.at("config"),
                      replay_io);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
