#include "traindyn/report.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "traindyn/errors.hpp"

namespace traindyn {

namespace {

using json = nlohmann::ordered_json;

json series_json(const MetricSeries& s) {
  json a = json::array();
  for (const auto& v : s) a.push_back(v ? json(*v) : json(nullptr));
  return a;
}

MetricSeries series_from(const json& a, std::size_t n, const char* name) {
  if (!a.is_array() || a.size() != n)
    throw SchemaError(std::string("report series '") + name + "' is not an array of length " +
                      std::to_string(n));
  MetricSeries s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!a[i].is_null()) s[i] = a[i].get<double>();
  return s;
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(const json& obj, const char* key) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  return obj[key].get<T>();
}

json config_json(const AnalysisConfig& c) {
  json j;
  j["h_opt"] = c.h_opt;
  j["sigma_h"] = c.sigma_h;
  j["w_h"] = c.w_h;
  j["w_m"] = c.w_m();
  j["rolling_window"] = c.rolling_window;
  j["volatility_threshold"] = c.volatility_threshold;
  j["phase_mode"] = std::string(to_string(c.phase_mode));
  j["dfa_mode"] = std::string(to_string(c.dfa_mode));
  j["dfa_min_scale"] = c.dfa_min_scale;
  j["dfa_max_scales"] = c.dfa_max_scales;
  j["plateau_fraction"] = c.plateau_fraction;
  j["hz_field"] = std::string(to_string(c.hz_field));
  const auto& g = c.gates;
  json gates;
  gates["rapid_ratio"] = g.rapid_ratio;
  gates["slow_ratio"] = g.slow_ratio;
  gates["flat_band"] = g.flat_band;
  gates["late_fraction"] = g.late_fraction;
  gates["heff_high"] = g.heff_high;
  gates["heff_low"] = g.heff_low;
  gates["heff_partial_max"] = g.heff_partial_max;
  gates["rigid_sync_min"] = g.rigid_sync_min;
  gates["partial_sync_max"] = g.partial_sync_max;
  gates["use_full_mean_heff"] = g.use_full_mean_heff;
  j["taxonomy_gates"] = std::move(gates);
  return j;
}

AnalysisConfig config_from(const json& j) {
  AnalysisConfig c;
  c.h_opt = j.at("h_opt").get<double>();
  c.sigma_h = j.at("sigma_h").get<double>();
  c.w_h = j.at("w_h").get<double>();
  c.rolling_window = j.at("rolling_window").get<int>();
  c.volatility_threshold = j.at("volatility_threshold").get<double>();
  c.phase_mode = parse_phase_mode(j.at("phase_mode").get<std::string>());
  c.dfa_mode = parse_dfa_mode(j.at("dfa_mode").get<std::string>());
  c.dfa_min_scale = j.at("dfa_min_scale").get<int>();
  c.dfa_max_scales = j.at("dfa_max_scales").get<int>();
  c.plateau_fraction = j.at("plateau_fraction").get<double>();
  c.hz_field = parse_integration_field(j.at("hz_field").get<std::string>());
  if (j.contains("taxonomy_gates")) {
    const auto& g = j["taxonomy_gates"];
    auto& o = c.gates;
    o.rapid_ratio = g.at("rapid_ratio").get<double>();
    o.slow_ratio = g.at("slow_ratio").get<double>();
    o.flat_band = g.at("flat_band").get<double>();
    o.late_fraction = g.at("late_fraction").get<double>();
    o.heff_high = g.at("heff_high").get<double>();
    o.heff_low = g.at("heff_low").get<double>();
    o.heff_partial_max = g.at("heff_partial_max").get<double>();
    o.rigid_sync_min = g.at("rigid_sync_min").get<double>();
    o.partial_sync_max = g.at("partial_sync_max").get<double>();
    o.use_full_mean_heff = g.at("use_full_mean_heff").get<bool>();
  }
  return c;
}

// (name, member) pairs in serialization order.
const std::pair<const char*, MetricSeries ReportSeries::*> kSeriesFields[] = {
    {"accuracy", &ReportSeries::accuracy},   {"h_raw", &ReportSeries::h_raw},
    {"h_eff", &ReportSeries::h_eff},         {"r", &ReportSeries::r},
    {"m", &ReportSeries::m},                 {"h_eff_norm", &ReportSeries::h_eff_norm},
    {"m_norm", &ReportSeries::m_norm},       {"psi", &ReportSeries::psi},
    {"sigma_psi", &ReportSeries::sigma_psi}, {"h_z", &ReportSeries::h_z},
    {"m_z", &ReportSeries::m_z},
};

}  // namespace

std::string report_to_json(const AnalysisReport& rep, int indent) {
  json doc;
  json trace;
  trace["run_id"] = rep.run_id;
  trace["layers"] = rep.layer_names;
  trace["n_epochs"] = rep.epochs.size();
  doc["trace"] = std::move(trace);
  doc["config"] = config_json(rep.config);

  json series;
  series["epoch"] = rep.epochs;
  for (const auto& [name, member] : kSeriesFields) series[name] = series_json(rep.series.*member);
  doc["series"] = std::move(series);

  const auto& s = rep.summary;
  json summary;
  summary["mean_heff"] = s.mean_heff;
  summary["std_heff"] = s.std_heff;
  summary["mean_m"] = s.mean_m;
  summary["mean_psi"] = s.mean_psi;
  summary["std_psi"] = s.std_psi;
  summary["r_hz_mz"] = opt(s.r_hz_mz);
  summary["r_psi_acc"] = opt(s.r_psi_acc);
  summary["volatility_crossing_epoch"] = opt(s.volatility_crossing_epoch);
  summary["accuracy_plateau_epoch"] = opt(s.accuracy_plateau_epoch);
  json hurst = json::object();
  for (std::size_t l = 0; l < rep.layer_names.size() && l < s.full_series_hurst.size(); ++l)
    hurst[rep.layer_names[l]] = opt(s.full_series_hurst[l]);
  summary["full_series_hurst"] = std::move(hurst);
  doc["summary"] = std::move(summary);

  json tax;
  if (rep.signature) {
    tax["heff_late"] = rep.signature->heff_late;
    tax["trend"] = std::string(taxonomy::to_string(rep.signature->trend));
    tax["r_hz_mz"] = rep.signature->r_hz_mz;
    tax["r_psi_acc"] = opt(rep.signature->r_psi_acc);
  } else {
    tax["heff_late"] = nullptr;
    tax["trend"] = nullptr;
    tax["r_hz_mz"] = nullptr;
    tax["r_psi_acc"] = nullptr;
  }
  tax["state"] = std::string(taxonomy::to_string(rep.state));
  doc["taxonomy"] = std::move(tax);

  json flags;
  flags["heff_norm_degenerate"] = rep.flags.heff_norm_degenerate;
  flags["m_norm_degenerate"] = rep.flags.m_norm_degenerate;
  flags["notes"] = rep.flags.notes;
  doc["flags"] = std::move(flags);
  return doc.dump(indent) + "\n";
}

AnalysisReport report_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("report is not valid JSON: ") + e.what());
  }
  try {
    AnalysisReport rep;
    const auto& trace = doc.at("trace");
    rep.run_id = trace.at("run_id").get<std::string>();
    rep.layer_names = trace.at("layers").get<std::vector<std::string>>();
    rep.config = config_from(doc.at("config"));

    const auto& series = doc.at("series");
    rep.epochs = series.at("epoch").get<std::vector<int>>();
    const std::size_t n = rep.epochs.size();
    for (const auto& [name, member] : kSeriesFields)
      rep.series.*member = series_from(series.at(name), n, name);

    const auto& s = doc.at("summary");
    auto& out = rep.summary;
    out.mean_heff = s.at("mean_heff").get<double>();
    out.std_heff = s.at("std_heff").get<double>();
    out.mean_m = s.at("mean_m").get<double>();
    out.mean_psi = s.at("mean_psi").get<double>();
    out.std_psi = s.at("std_psi").get<double>();
    out.r_hz_mz = opt_from<double>(s, "r_hz_mz");
    out.r_psi_acc = opt_from<double>(s, "r_psi_acc");
    out.volatility_crossing_epoch = opt_from<int>(s, "volatility_crossing_epoch");
    out.accuracy_plateau_epoch = opt_from<int>(s, "accuracy_plateau_epoch");
    if (s.contains("full_series_hurst"))
      for (const auto& name : rep.layer_names)
        out.full_series_hurst.push_back(opt_from<double>(s["full_series_hurst"], name.c_str()));

    const auto& tax = doc.at("taxonomy");
    rep.state = taxonomy::parse_state(tax.at("state").get<std::string>());
    if (!tax.at("trend").is_null()) {
      taxonomy::TaxonomySignature sig;
      sig.heff_late = tax.at("heff_late").get<double>();
      sig.trend = taxonomy::parse_trend(tax.at("trend").get<std::string>());
      sig.r_hz_mz = tax.at("r_hz_mz").get<double>();
      sig.r_psi_acc = opt_from<double>(tax, "r_psi_acc");
      rep.signature = sig;
    }
    const auto& flags = doc.at("flags");
    rep.flags.heff_norm_degenerate = flags.at("heff_norm_degenerate").get<bool>();
    rep.flags.m_norm_degenerate = flags.at("m_norm_degenerate").get<bool>();
    rep.flags.notes = flags.at("notes").get<std::vector<std::string>>();
    return rep;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed report: ") + e.what());
  }
}

void save_report(const std::filesystem::path& path, const AnalysisReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write report '" + path.string() + "'");
  out << report_to_json(report);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

AnalysisReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open report '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return report_from_json(ss.str());
}

}  // namespace traindyn
