#include "traindyn/cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "traindyn/analysis.hpp"
#include "traindyn/errors.hpp"
#include "traindyn/report.hpp"
#include "traindyn/sensitivity.hpp"
#include "traindyn/synthgen.hpp"
#include "traindyn/taxonomy.hpp"
#include "traindyn/trace.hpp"

namespace traindyn {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

class Style {
 public:
  explicit Style(bool color) : color_(color) {}
  std::string bold(const std::string& s) const { return wrap("1", s); }
  std::string dim(const std::string& s) const { return wrap("2", s); }
  std::string state(taxonomy::StateLabel label, const std::string& s) const {
    switch (label) {
      case taxonomy::StateLabel::StableConvergent: return wrap("1;32", s);
      case taxonomy::StateLabel::MetastableHighIntegration: return wrap("1;36", s);
      case taxonomy::StateLabel::PartialIntegration: return wrap("1;33", s);
      case taxonomy::StateLabel::RigidlySynchronised: return wrap("1;31", s);
      case taxonomy::StateLabel::Unclassified: return wrap("1", s);
    }
    return s;
  }

 private:
  std::string wrap(const char* code, const std::string& s) const {
    if (!color_) return s;
    return std::string("\033[") + code + "m" + s + "\033[0m";
  }
  bool color_;
};

std::string fixed(double v, int precision = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

std::string signed_fixed(const std::optional<double>& v, int precision = 3) {
  if (!v) return "n/a";
  std::ostringstream os;
  os << std::showpos << std::fixed << std::setprecision(precision) << *v;
  return os.str();
}

std::string state_title(taxonomy::StateLabel s) {
  switch (s) {
    case taxonomy::StateLabel::StableConvergent: return "Stable Convergent";
    case taxonomy::StateLabel::MetastableHighIntegration: return "Metastable High-Integration";
    case taxonomy::StateLabel::PartialIntegration: return "Partial Integration";
    case taxonomy::StateLabel::RigidlySynchronised: return "Rigidly Synchronised";
    case taxonomy::StateLabel::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

CLI::Validator unit_interval(const std::string& name) {
  return CLI::Validator(
      [name](std::string& s) -> std::string {
        double v = 0.0;
        try {
          std::size_t used = 0;
          v = std::stod(s, &used);
          if (used != s.size()) throw std::invalid_argument(s);
        } catch (const std::exception&) {
          return name + " must be a number, got '" + s + "'";
        }
        if (!(v >= 0.0 && v <= 1.0)) return name + " must lie in [0,1], got " + s;
        return {};
      },
      "in [0,1]");
}

struct ConfigFlags {
  AnalysisConfig config;
  std::string phase_mode = "retrospective";
  std::string dfa_mode = "causal";
  std::string hz_field = "heff";
  std::string format;

  AnalysisConfig resolve() const {
    AnalysisConfig c = config;
    c.phase_mode = parse_phase_mode(phase_mode);
    c.dfa_mode = parse_dfa_mode(dfa_mode);
    c.hz_field = parse_integration_field(hz_field);
    return c;
  }
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  auto& c = f.config;
  cmd->add_option("--h-opt", c.h_opt, "Target Hurst exponent")->capture_default_str();
  cmd->add_option("--sigma-h", c.sigma_h, "Tuning width of H_eff")->capture_default_str();
  cmd->add_option("--w-h", c.w_h, "Weight of H_eff in the composite (w_M = 1 - w_H)")
      ->check(unit_interval("w_h"))
      ->capture_default_str();
  cmd->add_option("--window", c.rolling_window, "Rolling volatility window (epochs)")
      ->capture_default_str();
  cmd->add_option("--threshold", c.volatility_threshold, "Volatility threshold")
      ->capture_default_str();
  cmd->add_option("--phase-mode", f.phase_mode, "Phase extraction mode")
      ->check(CLI::IsMember({"retrospective", "causal"}))
      ->capture_default_str();
  cmd->add_option("--dfa-mode", f.dfa_mode, "DFA evaluation mode")
      ->check(CLI::IsMember({"causal", "retrospective"}))
      ->capture_default_str();
  cmd->add_option("--dfa-min-scale", c.dfa_min_scale, "Smallest DFA window")
      ->capture_default_str();
  cmd->add_option("--dfa-max-scales", c.dfa_max_scales, "Maximum number of DFA scales")
      ->capture_default_str();
  cmd->add_option("--plateau-fraction", c.plateau_fraction, "Accuracy plateau fraction")
      ->check(unit_interval("plateau fraction"))
      ->capture_default_str();
  cmd->add_option("--hz-field", f.hz_field, "Integration field correlated with M")
      ->check(CLI::IsMember({"heff", "hraw"}))
      ->capture_default_str();
  cmd->add_option("--rapid-ratio", c.gates.rapid_ratio, "Trend gate: rapid collapse ratio")
      ->capture_default_str();
  cmd->add_option("--slow-ratio", c.gates.slow_ratio, "Trend gate: slow collapse ratio")
      ->capture_default_str();
  cmd->add_option("--flat-band", c.gates.flat_band, "Trend gate: flat band")
      ->capture_default_str();
  cmd->add_option("--late-fraction", c.gates.late_fraction, "Share of epochs for late H_eff")
      ->capture_default_str();
  cmd->add_flag("--full-mean-heff", c.gates.use_full_mean_heff,
                "Classify on the all-epoch mean H_eff instead of the late window");
  cmd->add_option("--format", f.format, "Trace format (default: from extension)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
}

TraceFormat format_for(const std::string& flag, const fs::path& path) {
  return flag.empty() ? guess_trace_format(path) : parse_trace_format(flag);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  os << text;
  if (!os) throw Error("failed writing '" + path.string() + "'");
}

void print_summary(std::ostream& out, const Style& st, const AnalysisReport& rep) {
  const auto& s = rep.summary;
  const std::string thr = fixed(rep.config.volatility_threshold, 2);
  out << st.bold(rep.run_id) << "  " << st.dim("(" + std::to_string(rep.layer_names.size()) +
                                                " layers, " + std::to_string(rep.epochs.size()) +
                                                " epochs)")
      << "\n";
  out << "  state          " << st.state(rep.state, state_title(rep.state)) << "\n";
  out << "  H_eff          " << fixed(s.mean_heff) << " +/- " << fixed(s.std_heff) << "\n";
  out << "  r(H_z, M_z)    " << signed_fixed(s.r_hz_mz) << "\n";
  out << "  r(Psi, acc)    " << signed_fixed(s.r_psi_acc) << "\n";
  out << "  sigma_Psi<" << thr << "  "
      << (s.volatility_crossing_epoch ? "epoch " + std::to_string(*s.volatility_crossing_epoch)
                                      : std::string("---"))
      << "\n";
  if (rep.signature) {
    out << "  " << st.dim("late H_eff " + fixed(rep.signature->heff_late) + ", volatility " +
                          std::string(taxonomy::to_string(rep.signature->trend)))
        << "\n";
  }
  for (const auto& note : rep.flags.notes) out << "  " << st.dim("note: " + note) << "\n";
}

// Stored series a sensitivity sweep consumes.
struct SweepInput {
  std::string run_id;
  MetricSeries h_raw;
  MetricSeries h_eff_norm;
  MetricSeries m_norm;
  MetricSeries accuracy;
  MetricSeries sigma_psi;
  std::vector<int> epochs;
  double plateau_fraction = 0.99;
  bool has_accuracy = false;
};

SweepInput sweep_input(const fs::path& path, const ConfigFlags& flags) {
  AnalysisReport rep;
  if (path.extension() == ".json") {
    rep = load_report(path);
  } else {
    rep = analyze(load_trace(path, format_for(flags.format, path)), flags.resolve());
  }
  SweepInput in;
  in.run_id = rep.run_id;
  in.h_raw = rep.series.h_raw;
  in.h_eff_norm = rep.series.h_eff_norm;
  in.m_norm = rep.series.m_norm;
  in.accuracy = rep.series.accuracy;
  in.sigma_psi = rep.series.sigma_psi;
  in.epochs = rep.epochs;
  in.plateau_fraction = rep.config.plateau_fraction;
  in.has_accuracy = rep.series.accuracy.count_present() > 0;
  return in;
}

// Pooled mean of per-run mean H_eff for one grid cell.
double group_mean(const std::vector<std::vector<sensitivity::HeffCell>>& grids, std::size_t cell) {
  double sum = 0.0;
  for (const auto& g : grids) sum += g[cell].mean_heff;
  return sum / static_cast<double>(grids.size());
}

std::optional<int> epoch_of(const SweepInput& in, const std::optional<std::size_t>& index) {
  if (!index) return std::nullopt;
  return in.epochs.at(*index);
}

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : nullptr; }
ordered_json opt_json(const std::optional<int>& v) { return v ? ordered_json(*v) : nullptr; }

struct SensitivityArgs {
  std::vector<std::string> inputs;
  std::vector<std::string> compare;
  std::vector<double> h_opt = sensitivity::kDefaultHOpt;
  std::vector<double> sigma = sensitivity::kDefaultSigmaH;
  std::vector<double> weights = sensitivity::kDefaultWeights;
  std::vector<double> thresholds = sensitivity::kDefaultThresholds;
  double gap = sensitivity::kDefaultSeparationGap;
  std::string output;
};

int cmd_sensitivity(const SensitivityArgs& args, const ConfigFlags& flags, std::ostream& out,
                    const Style& st) {
  std::vector<SweepInput> group_a, group_b;
  for (const auto& p : args.inputs) group_a.push_back(sweep_input(p, flags));
  for (const auto& p : args.compare) group_b.push_back(sweep_input(p, flags));

  auto grids_of = [&](const std::vector<SweepInput>& group) {
    std::vector<std::vector<sensitivity::HeffCell>> grids;
    for (const auto& in : group)
      grids.push_back(sensitivity::heff_grid(in.h_raw, args.h_opt, args.sigma));
    return grids;
  };
  const auto grids_a = grids_of(group_a);
  const auto grids_b = grids_of(group_b);
  const bool comparing = !grids_b.empty();
  const std::size_t n_cells = grids_a.front().size();

  ordered_json doc;
  doc["inputs"] = args.inputs;
  if (comparing) doc["compare"] = args.compare;

  // Mean H_eff grid.
  out << st.bold("Mean H_eff") << "\n";
  out << lpad("H_opt", 6) << lpad("sigma_H", 9) << lpad(comparing ? "A" : "H_eff", 9);
  if (comparing) out << lpad("B", 9) << lpad("Sep.", 6);
  out << "\n";
  ordered_json heff = ordered_json::array();
  for (std::size_t i = 0; i < n_cells; ++i) {
    const auto& cell = grids_a.front()[i];
    if (i > 0 && cell.h_opt != grids_a.front()[i - 1].h_opt) out << "\n";
    const double a = group_mean(grids_a, i);
    ordered_json j{{"h_opt", cell.h_opt}, {"sigma_h", cell.sigma_h}, {"mean_heff", a}};
    out << lpad(fixed(cell.h_opt, 2), 6) << lpad(fixed(cell.sigma_h, 2), 9) << lpad(fixed(a), 9);
    if (comparing) {
      const double b = group_mean(grids_b, i);
      const bool sep = sensitivity::separation_flag(a, b, args.gap);
      out << lpad(fixed(b), 9) << lpad(sep ? "Yes" : "No", 6);
      j["mean_heff_compare"] = b;
      j["separated"] = sep;
    }
    out << "\n";
    heff.push_back(std::move(j));
  }
  doc["heff_grid"] = std::move(heff);

  std::vector<const SweepInput*> runs;
  for (const auto& in : group_a) runs.push_back(&in);
  for (const auto& in : group_b) runs.push_back(&in);
  std::size_t name_width = 14;
  for (const auto* r : runs) name_width = std::max(name_width, r->run_id.size() + 2);

  // Composite weight list.
  out << "\n" << st.bold("r(Psi, acc) by composite weight") << "\n";
  out << pad("Run", name_width);
  for (double w : args.weights) out << lpad("w_H=" + fixed(w, 1), 10);
  out << lpad("Stable", 8) << "\n";
  ordered_json weights = ordered_json::array();
  for (const auto* r : runs) {
    ordered_json j{{"run_id", r->run_id}};
    out << pad(r->run_id, name_width);
    if (!r->has_accuracy) {
      for (std::size_t k = 0; k < args.weights.size(); ++k) out << lpad("n/a", 10);
      out << lpad("n/a", 8) << "\n";
      ordered_json cells = ordered_json::array();
      for (double w : args.weights) cells.push_back({{"w_h", w}, {"r_psi_acc", nullptr}});
      j["cells"] = std::move(cells);
      j["sign_stable"] = nullptr;
      j["note"] = "no validation accuracy recorded";
    } else {
      const auto g = sensitivity::weight_grid(r->h_eff_norm, r->m_norm, r->accuracy, args.weights);
      ordered_json cells = ordered_json::array();
      for (const auto& c : g.cells) {
        out << lpad(signed_fixed(c.r_psi_acc), 10);
        cells.push_back({{"w_h", c.w_h}, {"r_psi_acc", opt_json(c.r_psi_acc)}});
      }
      out << lpad(g.sign_stable ? (*g.sign_stable ? "yes" : "no") : "n/a", 8) << "\n";
      j["cells"] = std::move(cells);
      j["sign_stable"] = g.sign_stable ? ordered_json(*g.sign_stable) : nullptr;
    }
    weights.push_back(std::move(j));
  }
  doc["weight_grid"] = std::move(weights);

  // Threshold crossings.
  out << "\n" << st.bold("First epoch with sigma_Psi below threshold") << "\n";
  out << pad("Run", name_width);
  for (double t : args.thresholds) out << lpad("<" + fixed(t, 2), 8);
  out << lpad("Acc. plateau", 14) << "\n";
  ordered_json thresholds = ordered_json::array();
  for (const auto* r : runs) {
    const auto acc = r->has_accuracy ? std::optional<MetricSeries>(r->accuracy) : std::nullopt;
    const auto g =
        sensitivity::threshold_grid(r->sigma_psi, args.thresholds, acc, r->plateau_fraction);
    ordered_json cells = ordered_json::array();
    out << pad(r->run_id, name_width);
    for (const auto& c : g.cells) {
      const auto ep = epoch_of(*r, c.index);
      out << lpad(ep ? std::to_string(*ep) : "---", 8);
      cells.push_back({{"threshold", c.threshold}, {"epoch", opt_json(ep)}});
    }
    const auto plateau = epoch_of(*r, g.plateau_index);
    out << lpad(plateau ? "ep. " + std::to_string(*plateau) : "---", 14) << "\n";
    thresholds.push_back(
        {{"run_id", r->run_id}, {"cells", std::move(cells)}, {"plateau_epoch", opt_json(plateau)}});
  }
  doc["threshold_grid"] = std::move(thresholds);

  if (!args.output.empty()) write_text(args.output, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const char* no_color = std::getenv("TRAINDYN_NO_COLOR");
  const bool color = (no_color == nullptr || *no_color == '\0') && &out == &std::cout &&
                     ::isatty(STDOUT_FILENO) != 0;
  const Style st(color);

  CLI::App app{"Dynamical training diagnostics from layer-activation traces", "traindyn"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "traindyn 0.1.0");

  ConfigFlags flags;

  std::string analyze_input, analyze_output;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compute the diagnostic report of a trace");
  analyze_cmd->add_option("trace", analyze_input, "Trace file (CSV or JSONL)")->required();
  analyze_cmd->add_option("-o,--output", analyze_output, "Report JSON path");
  add_config_flags(analyze_cmd, flags);

  SensitivityArgs sens;
  auto* sens_cmd =
      app.add_subcommand("sensitivity", "Hyperparameter sweeps over stored metric series");
  sens_cmd->add_option("inputs", sens.inputs, "Trace files or report JSON files")->required();
  sens_cmd->add_option("--compare", sens.compare,
                       "Second group of traces or reports for the separation column");
  sens_cmd->add_option("--h-opt-grid", sens.h_opt, "H_opt values")->delimiter(',');
  sens_cmd->add_option("--sigma-grid", sens.sigma, "sigma_H values")->delimiter(',');
  sens_cmd->add_option("--w-grid", sens.weights, "w_H values")
      ->delimiter(',')
      ->check(unit_interval("w_h"));
  sens_cmd->add_option("--thresholds", sens.thresholds, "Volatility thresholds")->delimiter(',');
  sens_cmd->add_option("--gap", sens.gap, "Separation gap")->capture_default_str();
  sens_cmd->add_option("-o,--output", sens.output, "Grid JSON path");
  add_config_flags(sens_cmd, flags);

  std::string scenario, synth_output;
  std::size_t synth_length = 60;
  std::uint64_t synth_seed = 0;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic trace for a state");
  synth_cmd->add_option("scenario", scenario, "convergent, rigid, partial or metastable")
      ->required()
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            try {
              synthgen::parse_scenario(s);
            } catch (const DomainError& e) {
              return e.what();
            }
            return {};
          },
          "SCENARIO"));
  synth_cmd->add_option("--length", synth_length, "Number of epochs (>= 40)")
      ->check(CLI::Range(std::size_t{40}, std::size_t{100000}))
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_seed, "Random seed")->required();
  synth_cmd->add_option("-o,--output", synth_output, "Output trace path")->required();
  std::string synth_format = "csv";
  synth_cmd->add_option("--format", synth_format, "Trace format")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();

  std::string classify_input;
  std::optional<double> cl_heff;
  std::optional<double> cl_r;
  std::optional<double> cl_r_acc;
  std::string cl_trend;
  auto* classify_cmd = app.add_subcommand(
      "classify", "Classify a stored report or an explicit signature into a state");
  classify_cmd->add_option("report", classify_input, "Report JSON");
  classify_cmd->add_option("--heff-late", cl_heff, "Late-window mean H_eff");
  classify_cmd->add_option("--trend", cl_trend, "Volatility trend")
      ->check(CLI::IsMember({"rapidly_collapsing", "slowly_collapsing", "persistently_elevated",
                             "flat_nonconverging"}));
  classify_cmd->add_option("--r-hz-mz", cl_r, "r(H_z, M_z)");
  classify_cmd->add_option("--r-psi-acc", cl_r_acc, "r(Psi, acc), informational");

  std::string validate_input, validate_format;
  auto* validate_cmd = app.add_subcommand("validate", "Load a trace and list advisory warnings");
  validate_cmd->add_option("trace", validate_input, "Trace file")->required();
  validate_cmd->add_option("--format", validate_format, "Trace format")
      ->check(CLI::IsMember({"csv", "jsonl"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  AnalysisConfig config;
  try {
    config = flags.resolve();
    config.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (analyze_cmd->parsed()) {
      const fs::path path(analyze_input);
      const auto trace = load_trace(path, format_for(flags.format, path));
      const auto rep = analyze(trace, config);
      if (!analyze_output.empty()) save_report(analyze_output, rep);
      print_summary(out, st, rep);
      return 0;
    }
    if (sens_cmd->parsed()) return cmd_sensitivity(sens, flags, out, st);
    if (synth_cmd->parsed()) {
      const auto sc = synthgen::parse_scenario(scenario);
      const auto trace = synthgen::gen_trace(sc, synth_length, synth_seed);
      save_trace(synth_output, trace, parse_trace_format(synth_format));
      const auto rep = analyze(trace, AnalysisConfig{});
      out << "wrote " << synth_output << " (" << trace.n_layers() << " layers, "
          << trace.n_epochs() << " epochs)\n";
      out << "self-check: " << st.state(rep.state, std::string(taxonomy::to_string(rep.state)))
          << "\n";
      return 0;
    }
    if (classify_cmd->parsed()) {
      taxonomy::TaxonomySignature sig;
      taxonomy::StateLabel label = taxonomy::StateLabel::Unclassified;
      if (!classify_input.empty()) {
        const auto rep = load_report(classify_input);
        if (!rep.signature) {
          out << st.state(label, std::string(taxonomy::to_string(label)))
              << "  (report has no taxonomy signature)\n";
          return 0;
        }
        sig = *rep.signature;
        label = taxonomy::classify_state(sig, rep.config.gates);
      } else {
        if (!cl_heff || !cl_r || cl_trend.empty()) {
          err << "error: classify needs a report or all of --heff-late, --trend, --r-hz-mz\n";
          return 2;
        }
        sig.heff_late = *cl_heff;
        sig.trend = taxonomy::parse_trend(cl_trend);
        sig.r_hz_mz = *cl_r;
        sig.r_psi_acc = cl_r_acc;
        label = taxonomy::classify_state(sig, config.gates);
      }
      out << st.state(label, std::string(taxonomy::to_string(label))) << "  "
          << st.dim("(" + state_title(label) + "; late H_eff " + fixed(sig.heff_late) + ", " +
                    std::string(taxonomy::to_string(sig.trend)) + ", r(H_z,M_z) " +
                    signed_fixed(sig.r_hz_mz) + ")")
          << "\n";
      return 0;
    }
    if (validate_cmd->parsed()) {
      const fs::path path(validate_input);
      const auto trace = load_trace(path, format_for(validate_format, path));
      const auto warnings = validate_trace(trace, config);
      out << trace.run_id() << ": " << trace.n_layers() << " layers, " << trace.n_epochs()
          << " epochs, " << (warnings.empty() ? "no warnings" : std::to_string(warnings.size()) +
                                                                    " warning(s)")
          << "\n";
      for (const auto& w : warnings) out << "  warning: " << w << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace traindyn
