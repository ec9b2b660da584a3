// Copyright 2026 The photonfuse authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "photonfuse/analysis.hpp"
#include "photonfuse/protocol.hpp"
#include "photonfuse/sources.hpp"
#include "photonfuse/verify.hpp"

namespace {

using photonfuse::EmissionParams;
using photonfuse::LossParams;
using photonfuse::SourceSpec;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitVerification = 2;

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

struct CommonArgs {
  std::string config_path;
  std::optional<double> eta_s, eta_a, eta_b;
  std::optional<double> f_c, f_a, f_b;
  std::optional<double> eta_d;
  std::string format;
  std::string out_path;

  nlohmann::json file;

  void load_file() {
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open config file " + config_path);
    in >> file;
  }

  /// Flags override the config file; exactly one parameter family may be set.
  SourceSpec source() const {
    nlohmann::json merged = nlohmann::json::object();
    for (const char* key : {"eta_s", "eta_a", "eta_b", "f_c", "f_a", "f_b"}) {
      if (file.contains(key)) merged[key] = file[key];
    }
    auto put = [&merged](const char* key, const std::optional<double>& v) {
      if (v) merged[key] = *v;
    };
    put("eta_s", eta_s);
    put("eta_a", eta_a);
    put("eta_b", eta_b);
    put("f_c", f_c);
    put("f_a", f_a);
    put("f_b", f_b);
    if (merged.empty()) throw std::invalid_argument("no source parameters given");
    return photonfuse::source_from_json(merged);
  }

  bool has_source() const {
    if (eta_s || eta_a || eta_b || f_c || f_a || f_b) return true;
    for (const char* key : {"eta_s", "eta_a", "eta_b", "f_c", "f_a", "f_b"}) {
      if (file.contains(key)) return true;
    }
    return false;
  }

  double detector_efficiency() const {
    if (eta_d) return *eta_d;
    if (file.contains("eta_d")) return file["eta_d"].get<double>();
    return 1.0;
  }

  std::string output_format(const std::string& fallback) const {
    if (!format.empty()) return format;
    if (file.contains("format")) return file["format"].get<std::string>();
    return fallback;
  }

  std::string output_path() const {
    if (!out_path.empty()) return out_path;
    if (file.contains("out")) return file["out"].get<std::string>();
    return "";
  }

  void write_output(const std::string& text) const {
    const std::string path = output_path();
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write output file " + path);
    out << text;
  }
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file; flags override its values");
  auto opt = [cmd](const char* name, std::optional<double>& slot, const char* desc) {
    cmd->add_option_function<double>(name, [&slot](double v) { slot = v; }, desc);
  };
  opt("--eta-s", args.eta_s, "pair emission probability");
  opt("--eta-a", args.eta_a, "lone-photon-in-a probability");
  opt("--eta-b", args.eta_b, "lone-photon-in-b probability");
  opt("--f-c", args.f_c, "correlated loss rate");
  opt("--f-a", args.f_a, "uncorrelated loss rate in arm a");
  opt("--f-b", args.f_b, "uncorrelated loss rate in arm b");
  opt("--eta-d", args.eta_d, "detector efficiency (default 1)");
  cmd->add_option("--format", args.format, "output format: csv or json");
  cmd->add_option("--out", args.out_path, "output path (default: stdout)");
}

double env_tolerance() {
  if (const char* env = std::getenv("PHOTONFUSE_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0) return v;
    throw std::invalid_argument("PHOTONFUSE_TOL must be a positive number");
  }
  return 1e-9;
}

int run_ghz(const CommonArgs& args) {
  SourceSpec src = args.source();
  EmissionParams e = src.emission();
  if (!(e.eta_s > 0.0)) throw std::invalid_argument("eta_s must be positive");
  photonfuse::ProtocolConfig cfg{e, args.detector_efficiency()};
  nlohmann::json report = photonfuse::protocol_report(cfg);

  if (args.output_format("table") == "json") {
    args.write_output(report.dump(2) + "\n");
    return kExitOk;
  }
  std::string text;
  const auto& c = report["config"];
  text += "source: eta_s=" + fmt(c["eta_s"].get<double>(), 9) + " eta_a=" + fmt(c["eta_a"].get<double>(), 9) +
          " eta_b=" + fmt(c["eta_b"].get<double>(), 9) + "\n";
  text += "        f_c=" + fmt(c["f_c"].get<double>(), 9) + " f_a=" + fmt(c["f_a"].get<double>(), 9) +
          " f_b=" + fmt(c["f_b"].get<double>(), 9) + "\n";
  text += "eta_d:  " + fmt(c["eta_d"].get<double>(), 9) + "\n";
  text += "p_success:     " + fmt(report["p_success"].get<double>(), 9) + "\n";
  text += "epsilon:       " + fmt(report["epsilon"].get<double>(), 9) + "\n";
  text += "ghz4_fidelity: " + fmt(report["ghz4_fidelity"].get<double>(), 9) + "\n";
  text += "residual:      " + fmt(report["residual"].get<double>(), 9) + "\n";
  text += "sector_weights:";
  for (const auto& w : report["sector_weights"]) text += " " + fmt(w.get<double>(), 9);
  text += "\npatterns:\n";
  for (const auto& [key, prob] : report["patterns"].items()) {
    text += "  " + key + "  " + fmt(prob.get<double>(), 9) + "\n";
  }
  args.write_output(text);
  return kExitOk;
}

int run_convert(const CommonArgs& args) {
  SourceSpec src = args.source();
  EmissionParams e = src.emission();
  LossParams l = src.loss();
  if (args.output_format("table") == "json") {
    nlohmann::json j;
    j["emission"] = {{"eta_s", e.eta_s}, {"eta_a", e.eta_a}, {"eta_b", e.eta_b}};
    j["loss"] = {{"f_c", l.f_c}, {"f_a", l.f_a}, {"f_b", l.f_b}};
    args.write_output(j.dump(2) + "\n");
    return kExitOk;
  }
  std::string text;
  text += "emission: eta_s=" + fmt(e.eta_s, 17) + " eta_a=" + fmt(e.eta_a, 17) +
          " eta_b=" + fmt(e.eta_b, 17) + "\n";
  text += "loss:     f_c=" + fmt(l.f_c, 17) + " f_a=" + fmt(l.f_a, 17) +
          " f_b=" + fmt(l.f_b, 17) + "\n";
  args.write_output(text);
  return kExitOk;
}

photonfuse::GridAxis parse_grid(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("grid must look like var=start:stop:step");
  }
  photonfuse::GridAxis axis;
  axis.var = photonfuse::sweep_var_from_string(text.substr(0, eq));
  const std::string rest = text.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = rest.find(':', c1 == std::string::npos ? 0 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw std::invalid_argument("grid must look like var=start:stop:step");
  }
  axis.start = std::stod(rest.substr(0, c1));
  axis.stop = std::stod(rest.substr(c1 + 1, c2 - c1 - 1));
  axis.step = std::stod(rest.substr(c2 + 1));
  return axis;
}

int run_sweep(const CommonArgs& args, const std::vector<std::string>& grid_flags, bool slow_path) {
  photonfuse::SweepSpec spec;
  if (args.has_source()) spec.base = args.source().loss();
  spec.eta_d = args.detector_efficiency();
  spec.slow_path = slow_path || (args.file.contains("slow_path") && args.file["slow_path"].get<bool>());

  std::vector<std::string> grids = grid_flags;
  if (grids.empty() && args.file.contains("grid")) {
    grids = args.file["grid"].get<std::vector<std::string>>();
  }
  for (const auto& g : grids) spec.axes.push_back(parse_grid(g));

  std::vector<photonfuse::SweepRow> rows = photonfuse::sweep(spec);
  if (args.output_format("csv") == "json") {
    args.write_output(photonfuse::sweep_json(rows).dump(2) + "\n");
  } else {
    args.write_output(photonfuse::sweep_csv(rows));
  }
  return kExitOk;
}

int run_verify(const CommonArgs& args, double inject_pbs_phase) {
  photonfuse::VerifyOptions options;
  options.tol = env_tolerance();
  options.inject_pbs_phase = inject_pbs_phase;
  std::vector<photonfuse::CheckResult> checks = photonfuse::run_verification(options);

  bool all_pass = true;
  if (args.output_format("table") == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
      all_pass = all_pass && c.pass;
      arr.push_back({{"name", c.name},
                     {"criterion", c.criterion},
                     {"deviation", c.deviation},
                     {"tolerance", c.tolerance},
                     {"pass", c.pass}});
    }
    args.write_output(arr.dump(2) + "\n");
  } else {
    std::string text;
    for (const auto& c : checks) {
      all_pass = all_pass && c.pass;
      text += std::string(c.pass ? "[PASS] " : "[FAIL] ") + c.name +
              "  (deviation " + fmt(c.deviation, 3) + ", tolerance " + fmt(c.tolerance, 3) + ")\n";
    }
    text += all_pass ? "all checks passed\n" : "verification FAILED\n";
    args.write_output(text);
  }
  return all_pass ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photonfuse: exact simulator of heralded GHZ generation from four imperfect "
               "photon-pair sources with on/off detectors"};
  app.require_subcommand(1);

  CommonArgs ghz_args, convert_args, sweep_args, verify_args;
  std::vector<std::string> grid_flags;
  bool slow_path = false;
  double inject_pbs_phase = 0.0;

  CLI::App* ghz = app.add_subcommand("ghz", "run the fusion pipeline and report the heralded state");
  add_common_options(ghz, ghz_args);

  CLI::App* verify = app.add_subcommand("verify", "run the self-verification suite");
  add_common_options(verify, verify_args);
  verify->add_option("--inject-pbs-phase", inject_pbs_phase,
                     "test hook: extra PBS reflection phase (radians)")
      ->group("");

  CLI::App* sweep = app.add_subcommand("sweep", "tabulate thresholds over a parameter grid");
  add_common_options(sweep, sweep_args);
  sweep->add_option("--grid", grid_flags, "axis as var=start:stop:step (repeatable)");
  sweep->add_flag("--slow-path", slow_path, "also simulate and fit the loss rate per row");

  CLI::App* convert = app.add_subcommand("convert", "convert between source parameterizations");
  add_common_options(convert, convert_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (ghz->parsed()) {
      ghz_args.load_file();
      return run_ghz(ghz_args);
    }
    if (verify->parsed()) {
      verify_args.load_file();
      return run_verify(verify_args, inject_pbs_phase);
    }
    if (sweep->parsed()) {
      sweep_args.load_file();
      return run_sweep(sweep_args, grid_flags, slow_path);
    }
    if (convert->parsed()) {
      convert_args.load_file();
      return run_convert(convert_args);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
