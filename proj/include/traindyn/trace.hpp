#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "traindyn/config.hpp"
#include "traindyn/metric_series.hpp"

namespace traindyn {

// Per-layer batch-mean activations recorded at the end of one epoch.
struct EpochRecord {
  int epoch = 0;
  std::vector<double> signals;
  std::optional<double> val_accuracy;
  std::optional<double> val_loss;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

// Epoch-ordered activation signals for a fixed set of hooked layers.
// Instances built through make() or load_trace() always satisfy the
// invariants; the type is immutable afterwards.
class ActivationTrace {
 public:
  // Throws SchemaError/DomainError if the invariants do not hold.
  static ActivationTrace make(std::string run_id, std::vector<std::string> layer_names,
                              std::vector<EpochRecord> epochs);

  const std::string& run_id() const noexcept { return run_id_; }
  const std::vector<std::string>& layer_names() const noexcept { return layer_names_; }
  const std::vector<EpochRecord>& epochs() const noexcept { return epochs_; }

  std::size_t n_layers() const noexcept { return layer_names_.size(); }
  std::size_t n_epochs() const noexcept { return epochs_.size(); }

  // x_l(1..T) for one layer.
  std::vector<double> layer_signal(std::size_t layer) const;
  std::vector<int> epoch_numbers() const;
  // Missing where the record carries no accuracy.
  MetricSeries accuracy() const;
  bool has_accuracy() const;

  friend bool operator==(const ActivationTrace&, const ActivationTrace&) = default;

 private:
  ActivationTrace() = default;
  std::string run_id_;
  std::vector<std::string> layer_names_;
  std::vector<EpochRecord> epochs_;
};

enum class TraceFormat { csv, jsonl };

TraceFormat parse_trace_format(const std::string& s);
// csv unless the extension is .jsonl / .ndjson.
TraceFormat guess_trace_format(const std::filesystem::path& path);

ActivationTrace load_trace(const std::filesystem::path& path, TraceFormat format);
ActivationTrace parse_trace(std::istream& in, TraceFormat format, std::string run_id);

void write_trace(std::ostream& out, const ActivationTrace& trace, TraceFormat format);
void save_trace(const std::filesystem::path& path, const ActivationTrace& trace,
                TraceFormat format);

// Advisory checks; never throws.
std::vector<std::string> validate_trace(const ActivationTrace& trace,
                                        const AnalysisConfig& config);

}  // namespace traindyn
