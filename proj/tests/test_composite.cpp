#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "traindyn/composite.hpp"
#include "traindyn/errors.hpp"
#include "traindyn/synthgen.hpp"

using namespace traindyn;
using namespace traindyn::composite;

namespace {

MetricSeries random_series(synthgen::Rng& rng, std::size_t n, double missing_rate = 0.0) {
  MetricSeries s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng.uniform() >= missing_rate) s[i] = rng.normal();
  return s;
}

}  // namespace

TEST_CASE("minmax_normalize") {
  const auto a = minmax_normalize(MetricSeries{2.0, 4.0, 6.0});
  CHECK(a.series == MetricSeries{0.0, 0.5, 1.0});
  CHECK_FALSE(a.degenerate);
  const auto b = minmax_normalize(MetricSeries{5.0, 5.0, 5.0});
  CHECK(b.series == MetricSeries{0.0, 0.0, 0.0});
  CHECK(b.degenerate);
  const auto c = minmax_normalize(MetricSeries{std::nullopt, 1.0, 3.0});
  CHECK(c.series == MetricSeries{std::nullopt, 0.0, 1.0});
  CHECK_THROWS_AS(minmax_normalize(MetricSeries{std::nullopt, 1.0}), InsufficientData);
}

TEST_CASE("psi_series") {
  CHECK(*psi_series(MetricSeries{1.0}, MetricSeries{1.0}, 0.5, 0.5)[0] == doctest::Approx(1.0));
  CHECK(*psi_series(MetricSeries{1.0}, MetricSeries{0.0}, 0.3, 0.7)[0] == doctest::Approx(0.3));
  const auto p = psi_series(MetricSeries{std::nullopt, 0.2, 0.4}, MetricSeries{0.1, std::nullopt, 0.6},
                            0.5, 0.5);
  CHECK(p.missing(0));
  CHECK(p.missing(1));
  CHECK(*p[2] == doctest::Approx(0.5));
  CHECK_THROWS_AS(psi_series(MetricSeries{1.0}, MetricSeries{1.0}, 0.6, 0.6), DomainError);
  CHECK_THROWS_AS(psi_series(MetricSeries{1.0}, MetricSeries{1.0}, 1.2, -0.2), DomainError);
}

TEST_CASE("psi stays in [0,1] on normalized inputs (property)") {
  synthgen::Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 40);
    const auto h = minmax_normalize(random_series(rng, n)).series;
    const auto m = minmax_normalize(random_series(rng, n)).series;
    const double w = rng.uniform();
    for (const auto& v : psi_series(h, m, w, 1.0 - w)) {
      REQUIRE(v.has_value());
      CHECK(*v >= 0.0);
      CHECK(*v <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("rolling_volatility") {
  const auto flat = rolling_volatility(MetricSeries::from_dense(std::vector<double>(8, 0.4)), 5);
  for (std::size_t t = 0; t < 4; ++t) CHECK(flat.missing(t));
  for (std::size_t t = 4; t < 8; ++t) CHECK(*flat[t] == 0.0);

  const auto alt = rolling_volatility(MetricSeries{0.0, 1.0, 0.0, 1.0, 0.0, 1.0}, 2);
  CHECK(alt.missing(0));
  for (std::size_t t = 1; t < 6; ++t) CHECK(std::abs(*alt[t] - std::sqrt(0.5)) < 1e-12);

  const auto short_series = rolling_volatility(MetricSeries{1.0, std::nullopt, 2.0, 3.0, 4.0}, 5);
  for (const auto& v : short_series) CHECK_FALSE(v.has_value());

  const auto gappy = rolling_volatility(MetricSeries{0.0, std::nullopt, 1.0, 0.0}, 2);
  CHECK(gappy.missing(1));
  CHECK(std::abs(*gappy[2] - std::sqrt(0.5)) < 1e-12);
}

TEST_CASE("rolling volatility is shift invariant (property)") {
  synthgen::Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 40);
    const auto s = random_series(rng, n, 0.2);
    const double d = 50.0 * rng.normal();
    MetricSeries shifted(n);
    for (std::size_t i = 0; i < n; ++i)
      if (s[i]) shifted[i] = *s[i] + d;
    const int w = 2 + static_cast<int>(rng.uniform() * 5);
    const auto a = rolling_volatility(s, w), b = rolling_volatility(shifted, w);
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(a.missing(i) == b.missing(i));
      if (a[i]) CHECK(std::abs(*a[i] - *b[i]) < 1e-9);
    }
  }
}

TEST_CASE("zscore") {
  const auto z = zscore(MetricSeries{1.0, 2.0, 3.0});
  CHECK(*z[0] == doctest::Approx(-std::sqrt(1.5)));
  CHECK(*z[1] == doctest::Approx(0.0));
  CHECK(*z[2] == doctest::Approx(std::sqrt(1.5)));
  CHECK_THROWS_AS(zscore(MetricSeries{2.0, 2.0, 2.0}), DegenerateInput);

  synthgen::Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_series(rng, 3 + static_cast<std::size_t>(rng.uniform() * 50), 0.1);
    if (s.count_present() < 2) continue;
    const auto ms = mean_std(zscore(s));
    CHECK(std::abs(ms.mean) < 1e-9);
    CHECK(std::abs(ms.std - 1.0) < 1e-9);
  }
}

TEST_CASE("pearson") {
  CHECK(pearson(MetricSeries{1.0, 2.0, 3.0}, MetricSeries{2.0, 4.0, 6.0}) == doctest::Approx(1.0));
  CHECK(pearson(MetricSeries{1.0, 2.0, 3.0}, MetricSeries{3.0, 2.0, 1.0}) == doctest::Approx(-1.0));
  CHECK(std::abs(pearson(MetricSeries{1.0, 2.0, 1.0, 2.0}, MetricSeries{1.0, 1.0, 2.0, 2.0})) < 1e-12);
  const MetricSeries a{std::nullopt, 1.0, 2.0, 3.0, 10.0};
  const MetricSeries b{5.0, 2.0, 4.0, 6.0, std::nullopt};
  CHECK(pearson(a, b) == doctest::Approx(1.0));
  CHECK_THROWS_AS(pearson(MetricSeries{1.0, 2.0}, MetricSeries{1.0, 2.0}), InsufficientData);
  CHECK_THROWS_AS(pearson(MetricSeries{1.0, 1.0, 1.0}, MetricSeries{1.0, 2.0, 3.0}), DegenerateInput);
}

TEST_CASE("pearson agrees with the textbook formula, is symmetric and affine invariant (property)") {
  synthgen::Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform() * 60);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.normal();
      b[i] = 0.5 * a[i] + rng.normal();
    }
    const auto sa = MetricSeries::from_dense(a), sb = MetricSeries::from_dense(b);
    const double r = pearson(sa, sb);
    CHECK(std::abs(r - testutil::pearson_dense(a, b)) < 1e-12);
    CHECK(std::abs(pearson(sb, sa) - r) < 1e-12);
    double c = 5.0 * rng.normal();
    if (std::abs(c) < 1e-3) c = 1.0;
    const double d = 10.0 * rng.normal();
    MetricSeries mapped(n);
    for (std::size_t i = 0; i < n; ++i) mapped[i] = c * b[i] + d;
    CHECK(std::abs(pearson(sa, mapped) - (c > 0 ? r : -r)) < 1e-9);
    CHECK(std::abs(pearson(zscore(sa), zscore(sb)) - r) < 1e-9);
  }
}

TEST_CASE("threshold_crossing") {
  CHECK(threshold_crossing(MetricSeries{0.5, 0.4, 0.28, 0.2}, 0.30) == std::optional<std::size_t>(2));
  CHECK_FALSE(threshold_crossing(MetricSeries{0.5, 0.4, 0.3, 0.31}, 0.30).has_value());
  CHECK(threshold_crossing(MetricSeries{std::nullopt, std::nullopt, 0.1}, 0.30) ==
        std::optional<std::size_t>(2));
}

TEST_CASE("plateau_epoch") {
  CHECK(plateau_epoch(MetricSeries{0.5, 0.88, 0.885, 0.89}, 0.99) == std::optional<std::size_t>(2));
  CHECK(plateau_epoch(MetricSeries{0.1, 0.2, 0.3, 0.4}, 1.0) == std::optional<std::size_t>(3));
  CHECK(plateau_epoch(MetricSeries{0.6, 0.6, 0.6}, 0.99) == std::optional<std::size_t>(0));
  CHECK_THROWS_AS(plateau_epoch(MetricSeries{std::nullopt, std::nullopt}, 0.99), InsufficientData);
}

TEST_CASE("mean_std uses the population convention") {
  const auto ms = mean_std(MetricSeries{1.0, std::nullopt, 3.0});
  CHECK(ms.mean == 2.0);
  CHECK(ms.std == 1.0);
  CHECK(ms.count == 2);
  CHECK(mean_std(MetricSeries{std::nullopt}).count == 0);
}
