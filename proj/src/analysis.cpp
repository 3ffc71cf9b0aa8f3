#include "traindyn/analysis.hpp"

#include "traindyn/composite.hpp"
#include "traindyn/errors.hpp"
#include "traindyn/synchrony.hpp"

namespace traindyn {

namespace {

template <class F>
auto with_context(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DegenerateInput& e) {
    throw DegenerateInput(std::string(stage) + ": " + e.what());
  } catch (const InsufficientData& e) {
    throw InsufficientData(std::string(stage) + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(std::string(stage) + ": " + e.what());
  }
}

}  // namespace

AnalysisReport analyze(const ActivationTrace& trace, const AnalysisConfig& config) {
  config.validate();

  AnalysisReport rep;
  rep.run_id = trace.run_id();
  rep.layer_names = trace.layer_names();
  rep.epochs = trace.epoch_numbers();
  rep.config = config;
  rep.flags.notes = validate_trace(trace, config);
  auto note = [&](const std::string& what, const Error& e) {
    rep.flags.notes.push_back(what + " unavailable: " + e.what());
  };

  const std::size_t T = trace.n_epochs();
  auto& s = rep.series;
  s.accuracy = trace.accuracy();

  // Step 2
  auto heff = with_context("DFA", [&] { return dfa::heff_series(trace, config, config.dfa_mode); });
  s.h_raw = std::move(heff.h_raw);
  s.h_eff = std::move(heff.h_eff);
  for (const auto& est : heff.full_series)
    rep.summary.full_series_hurst.push_back(est ? std::optional(est->hurst) : std::nullopt);

  // Step 3
  auto sync = with_context("synchrony",
                           [&] { return synchrony::synchrony_pipeline(trace, config.phase_mode); });
  s.r = std::move(sync.r);
  s.m = std::move(sync.m);

  // Step 4
  s.h_eff_norm = MetricSeries(T);
  s.m_norm = MetricSeries(T);
  try {
    auto hn = composite::minmax_normalize(s.h_eff);
    s.h_eff_norm = std::move(hn.series);
    rep.flags.heff_norm_degenerate = hn.degenerate;
  } catch (const InsufficientData& e) {
    note("normalised H_eff", e);
  }
  try {
    auto mn = composite::minmax_normalize(s.m);
    s.m_norm = std::move(mn.series);
    rep.flags.m_norm_degenerate = mn.degenerate;
  } catch (const InsufficientData& e) {
    note("normalised M", e);
  }
  s.psi = composite::psi_series(s.h_eff_norm, s.m_norm, config.w_h, config.w_m());
  s.sigma_psi = composite::rolling_volatility(s.psi, config.rolling_window);

  // Derived diagnostics
  const auto& field = config.hz_field == IntegrationField::heff ? s.h_eff : s.h_raw;
  s.h_z = MetricSeries(T);
  s.m_z = MetricSeries(T);
  try {
    s.h_z = composite::zscore(field);
  } catch (const Error& e) {
    note("H_z", e);
  }
  try {
    s.m_z = composite::zscore(s.m);
  } catch (const Error& e) {
    note("M_z", e);
  }
  auto& sum = rep.summary;
  try {
    sum.r_hz_mz = composite::pearson(s.h_z, s.m_z);
  } catch (const Error& e) {
    note("r(H_z,M_z)", e);
  }
  if (s.accuracy.count_present() > 0) {
    try {
      sum.r_psi_acc = composite::pearson(s.psi, s.accuracy);
    } catch (const Error& e) {
      note("r(psi,acc)", e);
    }
    if (auto p = composite::plateau_epoch(s.accuracy, config.plateau_fraction))
      sum.accuracy_plateau_epoch = rep.epoch_at(*p);
  }
  if (auto c = composite::threshold_crossing(s.sigma_psi, config.volatility_threshold))
    sum.volatility_crossing_epoch = rep.epoch_at(*c);

  const auto h = composite::mean_std(s.h_eff);
  sum.mean_heff = h.mean;
  sum.std_heff = h.std;
  sum.mean_m = composite::mean_std(s.m).mean;
  const auto p = composite::mean_std(s.psi);
  sum.mean_psi = p.mean;
  sum.std_psi = p.std;

  // Taxonomy
  try {
    taxonomy::TaxonomySignature sig;
    sig.heff_late = taxonomy::late_heff(s.h_eff, config.gates);
    sig.trend = taxonomy::volatility_trend(s.sigma_psi, config.volatility_threshold, config.gates);
    if (!sum.r_hz_mz) throw InsufficientData("r(H_z,M_z) is unavailable");
    sig.r_hz_mz = *sum.r_hz_mz;
    sig.r_psi_acc = sum.r_psi_acc;
    rep.signature = sig;
    rep.state = taxonomy::classify_state(sig, config.gates);
  } catch (const Error& e) {
    note("taxonomy signature", e);
    rep.state = taxonomy::StateLabel::Unclassified;
  }
  return rep;
}

}  // namespace traindyn
