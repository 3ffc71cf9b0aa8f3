#include "traindyn/sensitivity.hpp"

#include "traindyn/composite.hpp"
#include "traindyn/dfa.hpp"
#include "traindyn/errors.hpp"

namespace traindyn::sensitivity {

std::vector<HeffCell> heff_grid(const MetricSeries& h_raw, const std::vector<double>& h_opt_values,
                                const std::vector<double>& sigma_h_values) {
  if (h_opt_values.empty() || sigma_h_values.empty())
    throw DomainError("heff_grid: parameter grids must be non-empty");
  if (h_raw.count_present() == 0) throw InsufficientData("heff_grid: no stored H_raw value");
  std::vector<HeffCell> cells;
  cells.reserve(h_opt_values.size() * sigma_h_values.size());
  for (double h_opt : h_opt_values)
    for (double sigma : sigma_h_values) {
      MetricSeries tuned(h_raw.size());
      for (std::size_t t = 0; t < h_raw.size(); ++t)
        if (h_raw[t]) tuned[t] = dfa::gaussian_tuning(*h_raw[t], h_opt, sigma);
      cells.push_back({h_opt, sigma, composite::mean_std(tuned).mean});
    }
  return cells;
}

bool separation_flag(double group_a_mean, double group_b_mean, double gap) {
  return group_a_mean - group_b_mean > gap;
}

WeightGrid weight_grid(const MetricSeries& heff_norm, const MetricSeries& m_norm,
                       const MetricSeries& accuracy, const std::vector<double>& w_h_values) {
  if (accuracy.count_present() == 0) throw InsufficientData("weight_grid: no accuracy recorded");
  WeightGrid grid;
  int sign = 0;
  bool stable = true, complete = true;
  for (double w : w_h_values) {
    WeightCell cell{w, std::nullopt};
    const auto psi = composite::psi_series(heff_norm, m_norm, w, 1.0 - w);
    try {
      cell.r_psi_acc = composite::pearson(psi, accuracy);
    } catch (const InsufficientData&) {
    } catch (const DegenerateInput&) {
    }
    if (!cell.r_psi_acc) {
      complete = false;
    } else {
      const int s = *cell.r_psi_acc > 0 ? 1 : (*cell.r_psi_acc < 0 ? -1 : 0);
      if (s == 0 || (sign != 0 && s != sign)) stable = false;
      if (sign == 0) sign = s;
    }
    grid.cells.push_back(cell);
  }
  if (complete && !grid.cells.empty()) grid.sign_stable = stable;
  return grid;
}

ThresholdGrid threshold_grid(const MetricSeries& sigma_psi, const std::vector<double>& thresholds,
                             const std::optional<MetricSeries>& accuracy,
                             double plateau_fraction) {
  ThresholdGrid grid;
  for (double th : thresholds) grid.cells.push_back({th, composite::threshold_crossing(sigma_psi, th)});
  if (accuracy && accuracy->count_present() > 0)
    grid.plateau_index = composite::plateau_epoch(*accuracy, plateau_fraction);
  return grid;
}

}  // namespace traindyn::sensitivity
