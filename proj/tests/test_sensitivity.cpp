#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "traindyn/composite.hpp"
#include "traindyn/errors.hpp"
#include "traindyn/sensitivity.hpp"
#include "traindyn/synthgen.hpp"

using namespace traindyn;
using namespace traindyn::sensitivity;

namespace {

MetricSeries constant(double v, std::size_t n) {
  return MetricSeries::from_dense(std::vector<double>(n, v));
}

}  // namespace

TEST_CASE("heff_grid examples") {
  const auto peak = heff_grid(constant(0.7, 10), {0.7}, {0.1});
  REQUIRE(peak.size() == 1);
  CHECK(peak[0].mean_heff == doctest::Approx(1.0));

  const auto low = heff_grid(constant(0.4, 10), {0.5, 0.7}, {0.1});
  CHECK(low[0].mean_heff > low[1].mean_heff);
  CHECK(low[0].mean_heff == doctest::Approx(std::exp(-0.5)));
  CHECK(low[1].mean_heff == doctest::Approx(std::exp(-4.5)));
}

TEST_CASE("heff_grid layout, missing values and contracts") {
  MetricSeries h{std::nullopt, 0.6, 0.8};
  const auto g = heff_grid(h, kDefaultHOpt, kDefaultSigmaH);
  REQUIRE(g.size() == 16);
  CHECK(g[0].h_opt == 0.5);
  CHECK(g[0].sigma_h == 0.05);
  CHECK(g[1].sigma_h == 0.10);
  CHECK(g[4].h_opt == 0.6);
  // (0.7, 0.1): mean of exp(-0.5) and exp(-0.5).
  CHECK(g[9].mean_heff == doctest::Approx(std::exp(-0.5)));
  CHECK_THROWS_AS(heff_grid(MetricSeries{std::nullopt}, {0.7}, {0.1}), InsufficientData);
  CHECK_THROWS_AS(heff_grid(h, {}, {0.1}), DomainError);
  CHECK_THROWS_AS(heff_grid(h, {0.7}, {0.0}), DomainError);
}

TEST_CASE("mean H_eff is maximised near the constant H_raw (property)") {
  synthgen::Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const double c = 0.2 + 0.6 * rng.uniform();
    std::vector<double> grid;
    for (int k = 0; k <= 100; ++k) grid.push_back(k / 100.0);
    const auto cells = heff_grid(constant(c, 5), grid, {0.1});
    std::size_t best = 0;
    for (std::size_t i = 1; i < cells.size(); ++i)
      if (cells[i].mean_heff > cells[best].mean_heff) best = i;
    CHECK(std::abs(cells[best].h_opt - c) <= 0.005 + 1e-12);
  }
}

TEST_CASE("separation_flag") {
  CHECK(separation_flag(0.793, 0.024, 0.30));
  CHECK_FALSE(separation_flag(0.275, 0.522, 0.30));
  CHECK_FALSE(separation_flag(0.5, 0.2, 0.30));
  CHECK(separation_flag(0.5, 0.19, 0.30));
}

TEST_CASE("weight grid: identical inputs give identical correlations") {
  const MetricSeries h{0.0, 0.3, 0.1, 0.8, 1.0, 0.6};
  const MetricSeries acc{0.1, 0.3, 0.2, 0.5, 0.7, 0.6};
  const auto g = weight_grid(h, h, acc, kDefaultWeights);
  REQUIRE(g.cells.size() == 3);
  for (const auto& c : g.cells) CHECK(*c.r_psi_acc == doctest::Approx(*g.cells[0].r_psi_acc));
  CHECK(g.sign_stable == std::optional<bool>(true));
}

TEST_CASE("weight grid: accuracy linear in psi at w_h = 0.5 gives r = 1 there") {
  const MetricSeries h{0.0, 0.5, 0.2, 1.0, 0.7};
  const MetricSeries m{1.0, 0.1, 0.4, 0.0, 0.9};
  MetricSeries acc(5);
  for (std::size_t i = 0; i < 5; ++i) acc[i] = 0.2 + 0.5 * (0.5 * *h[i] + 0.5 * *m[i]);
  const auto g = weight_grid(h, m, acc, {0.5});
  CHECK(*g.cells[0].r_psi_acc == doctest::Approx(1.0));
}

TEST_CASE("weight grid: opposed components flip the sign across weights") {
  synthgen::Rng rng(17);
  const std::size_t n = 40;
  MetricSeries acc(n), h(n), m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = static_cast<double>(i) / n;
    acc[i] = 0.3 + 0.6 * a;
    h[i] = a + 0.15 * rng.normal();
    m[i] = -a + 0.15 * rng.normal();
  }
  const auto hn = composite::minmax_normalize(h).series;
  const auto mn = composite::minmax_normalize(m).series;
  CHECK(composite::pearson(hn, acc) > 0.85);
  CHECK(composite::pearson(mn, acc) < -0.85);
  const auto g = weight_grid(hn, mn, acc, kDefaultWeights);
  CHECK(*g.cells.front().r_psi_acc < 0.0);
  CHECK(*g.cells.back().r_psi_acc > 0.0);
  CHECK(g.sign_stable == std::optional<bool>(false));
}

TEST_CASE("weight grid without accuracy is unavailable") {
  const MetricSeries h{0.0, 0.5, 1.0};
  CHECK_THROWS_AS(weight_grid(h, h, MetricSeries(3), kDefaultWeights), InsufficientData);
}

TEST_CASE("threshold grid") {
  MetricSeries decay(30);
  for (std::size_t i = 0; i < 30; ++i) decay[i] = 0.6 * std::exp(-0.08 * static_cast<double>(i));
  const auto g = threshold_grid(decay, kDefaultThresholds, std::nullopt);
  REQUIRE(g.cells.size() == 3);
  // Lower thresholds are crossed no earlier.
  CHECK(*g.cells[0].index >= *g.cells[1].index);
  CHECK(*g.cells[1].index >= *g.cells[2].index);
  CHECK_FALSE(g.plateau_index.has_value());

  const MetricSeries partial{0.5, 0.4, 0.33, 0.29, 0.27, 0.28};
  const auto p = threshold_grid(partial, kDefaultThresholds, std::nullopt);
  CHECK_FALSE(p.cells[0].index.has_value());
  CHECK(p.cells[1].index == std::optional<std::size_t>(3));
  CHECK(p.cells[2].index == std::optional<std::size_t>(2));

  const auto never = threshold_grid(constant(0.5, 10), kDefaultThresholds, std::nullopt);
  for (const auto& c : never.cells) CHECK_FALSE(c.index.has_value());

  const MetricSeries acc{0.2, 0.6, 0.8, 0.81, 0.8};
  const auto with_acc = threshold_grid(constant(0.5, 5), kDefaultThresholds, acc, 0.99);
  // 0.99 * 0.81 = 0.8019, first reached by the 0.81 entry.
  CHECK(with_acc.plateau_index == std::optional<std::size_t>(3));
}
