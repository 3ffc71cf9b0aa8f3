#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

namespace traindyn {

// Epoch-aligned sequence of optionally missing values. Index i corresponds to
// the i-th record of the trace the series was derived from.
class MetricSeries {
 public:
  using value_type = std::optional<double>;

  MetricSeries() = default;
  explicit MetricSeries(std::size_t n) : values_(n) {}
  explicit MetricSeries(std::vector<value_type> values) : values_(std::move(values)) {}
  MetricSeries(std::initializer_list<value_type> values) : values_(values) {}

  static MetricSeries from_dense(const std::vector<double>& dense) {
    MetricSeries s(dense.size());
    for (std::size_t i = 0; i < dense.size(); ++i) s.values_[i] = dense[i];
    return s;
  }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  const value_type& operator[](std::size_t i) const { return values_[i]; }
  value_type& operator[](std::size_t i) { return values_[i]; }

  bool missing(std::size_t i) const { return !values_[i].has_value(); }

  std::size_t count_present() const {
    std::size_t n = 0;
    for (const auto& v : values_) n += v.has_value() ? 1 : 0;
    return n;
  }

  // Present values in epoch order, MISSING entries dropped.
  std::vector<double> present() const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (const auto& v : values_)
      if (v) out.push_back(*v);
    return out;
  }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }
  const std::vector<value_type>& values() const noexcept { return values_; }

  friend bool operator==(const MetricSeries&, const MetricSeries&) = default;

 private:
  std::vector<value_type> values_;
};

}  // namespace traindyn
