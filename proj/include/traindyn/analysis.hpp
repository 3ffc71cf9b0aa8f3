#pragma once

#include <optional>
#include <string>
#include <vector>

#include "traindyn/config.hpp"
#include "traindyn/dfa.hpp"
#include "traindyn/metric_series.hpp"
#include "traindyn/taxonomy.hpp"
#include "traindyn/trace.hpp"

namespace traindyn {

struct DiagnosticSummary {
  double mean_heff = 0.0;
  double std_heff = 0.0;
  double mean_m = 0.0;
  double mean_psi = 0.0;
  double std_psi = 0.0;
  std::optional<double> r_hz_mz;
  std::optional<double> r_psi_acc;
  std::optional<int> volatility_crossing_epoch;
  std::optional<int> accuracy_plateau_epoch;
  // Full-series Hurst exponent per layer, missing where not estimable.
  std::vector<std::optional<double>> full_series_hurst;
};

struct ReportSeries {
  MetricSeries accuracy;
  MetricSeries h_raw;
  MetricSeries h_eff;
  MetricSeries r;
  MetricSeries m;
  MetricSeries h_eff_norm;
  MetricSeries m_norm;
  MetricSeries psi;
  MetricSeries sigma_psi;
  MetricSeries h_z;
  MetricSeries m_z;
};

struct ReportFlags {
  bool heff_norm_degenerate = false;
  bool m_norm_degenerate = false;
  // validate_trace warnings plus reasons for any unavailable quantity.
  std::vector<std::string> notes;
};

struct AnalysisReport {
  std::string run_id;
  std::vector<std::string> layer_names;
  std::vector<int> epochs;
  AnalysisConfig config;
  ReportSeries series;
  DiagnosticSummary summary;
  std::optional<taxonomy::TaxonomySignature> signature;
  taxonomy::StateLabel state = taxonomy::StateLabel::Unclassified;
  ReportFlags flags;

  // Epoch number of a series index.
  int epoch_at(std::size_t index) const { return epochs.at(index); }
};

// Steps 2-4 of the metric pipeline plus the derived diagnostics and the
// state classification. Throws on invalid config or when a layer is constant.
AnalysisReport analyze(const ActivationTrace& trace, const AnalysisConfig& config);

}  // namespace traindyn
