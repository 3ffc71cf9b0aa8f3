#include "traindyn/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "traindyn/errors.hpp"

namespace traindyn {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

double parse_number(std::string_view cell, std::size_t line, std::string_view column) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || cell.empty())
    throw ParseError(line, "column '" + std::string(column) + "': cannot parse '" +
                               std::string(cell) + "' as a number");
  return v;
}

int parse_epoch(std::string_view cell, std::size_t line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty())
    throw ParseError(line, "epoch '" + std::string(cell) + "' is not an integer");
  return v;
}

void check_record(const EpochRecord& r, const std::vector<std::string>& layers,
                  std::size_t line) {
  const std::string where = line ? " (line " + std::to_string(line) + ")" : "";
  if (r.epoch < 1)
    throw SchemaError("epoch " + std::to_string(r.epoch) + " is not positive" + where);
  if (r.signals.size() != layers.size())
    throw SchemaError("epoch " + std::to_string(r.epoch) + where + " has " +
                      std::to_string(r.signals.size()) + " signals, header declares " +
                      std::to_string(layers.size()));
  for (std::size_t l = 0; l < r.signals.size(); ++l)
    if (!std::isfinite(r.signals[l]))
      throw DomainError("epoch " + std::to_string(r.epoch) + where + ": signal for layer '" +
                        layers[l] + "' is not finite");
  if (r.val_accuracy && !(*r.val_accuracy >= 0.0 && *r.val_accuracy <= 1.0))
    throw DomainError("epoch " + std::to_string(r.epoch) + where + ": accuracy " +
                      std::to_string(*r.val_accuracy) + " outside [0,1]");
  if (r.val_loss && !(*r.val_loss >= 0.0 && std::isfinite(*r.val_loss)))
    throw DomainError("epoch " + std::to_string(r.epoch) + where + ": loss must be >= 0");
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

ActivationTrace parse_csv(std::istream& in, std::string run_id) {
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::string> layers;
  bool has_acc = false;
  bool header_seen = false;
  std::vector<EpochRecord> records;
  std::vector<std::size_t> record_lines;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (line.starts_with("#") || is_blank(line)) continue;
    auto cells = split(line, ',');
    if (!header_seen) {
      header_seen = true;
      if (cells.empty() || cells[0] != "epoch")
        throw SchemaError("line " + std::to_string(line_no) +
                          ": header must start with 'epoch'");
      std::size_t first_layer = 1;
      if (cells.size() > 1 && cells[1] == "acc") {
        has_acc = true;
        first_layer = 2;
      }
      std::set<std::string_view> seen;
      for (std::size_t i = first_layer; i < cells.size(); ++i) {
        if (cells[i].empty())
          throw SchemaError("line " + std::to_string(line_no) + ": empty layer name");
        if (!seen.insert(cells[i]).second)
          throw SchemaError("line " + std::to_string(line_no) + ": duplicate layer '" +
                            std::string(cells[i]) + "'");
        layers.emplace_back(cells[i]);
      }
      if (layers.size() < 2)
        throw SchemaError("header declares " + std::to_string(layers.size()) +
                          " layer column(s); at least 2 are required");
      continue;
    }
    const std::size_t expected = layers.size() + (has_acc ? 2 : 1);
    if (cells.size() != expected)
      throw SchemaError("line " + std::to_string(line_no) + ": row has " +
                        std::to_string(cells.size() - (has_acc ? 2 : 1)) +
                        " signal value(s), header declares " + std::to_string(layers.size()));
    EpochRecord r;
    r.epoch = parse_epoch(cells[0], line_no);
    std::size_t col = 1;
    if (has_acc) {
      if (!cells[1].empty()) r.val_accuracy = parse_number(cells[1], line_no, "acc");
      col = 2;
    }
    for (std::size_t l = 0; l < layers.size(); ++l, ++col) {
      if (cells[col].empty())
        throw DomainError("line " + std::to_string(line_no) + ": missing signal for layer '" +
                          layers[l] + "'");
      r.signals.push_back(parse_number(cells[col], line_no, layers[l]));
    }
    check_record(r, layers, line_no);
    if (!records.empty() && r.epoch <= records.back().epoch)
      throw SchemaError("line " + std::to_string(line_no) + ": epoch " +
                        std::to_string(r.epoch) + " does not follow epoch " +
                        std::to_string(records.back().epoch));
    records.push_back(std::move(r));
  }
  if (!header_seen) throw SchemaError("trace file has no header row");
  return ActivationTrace::make(std::move(run_id), std::move(layers), std::move(records));
}

ActivationTrace parse_jsonl(std::istream& in, std::string run_id) {
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::string> layers;
  std::vector<EpochRecord> records;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    ordered_json obj;
    try {
      obj = ordered_json::parse(line);
    } catch (const ordered_json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "record is not a JSON object");
    if (!obj.contains("epoch") || !obj["epoch"].is_number_integer())
      throw SchemaError("line " + std::to_string(line_no) + ": missing integer key 'epoch'");
    if (!obj.contains("signals") || !obj["signals"].is_object())
      throw SchemaError("line " + std::to_string(line_no) + ": missing object key 'signals'");
    const auto& sig = obj["signals"];
    if (layers.empty()) {
      for (auto it = sig.begin(); it != sig.end(); ++it) layers.push_back(it.key());
      if (layers.size() < 2)
        throw SchemaError("line " + std::to_string(line_no) + ": " +
                          std::to_string(layers.size()) +
                          " layer signal(s); at least 2 are required");
    }
    if (sig.size() != layers.size())
      throw SchemaError("line " + std::to_string(line_no) + ": record has " +
                        std::to_string(sig.size()) + " signals, expected " +
                        std::to_string(layers.size()));
    EpochRecord r;
    r.epoch = obj["epoch"].get<int>();
    for (const auto& name : layers) {
      if (!sig.contains(name))
        throw SchemaError("line " + std::to_string(line_no) + ": missing signal for layer '" +
                          name + "'");
      const auto& v = sig[name];
      if (!v.is_number())
        throw DomainError("line " + std::to_string(line_no) + ": signal for layer '" + name +
                          "' is not a finite number");
      r.signals.push_back(v.get<double>());
    }
    auto optional_number = [&](const char* key) -> std::optional<double> {
      if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
      if (!obj[key].is_number())
        throw ParseError(line_no, std::string("key '") + key + "' is not a number");
      return obj[key].get<double>();
    };
    r.val_accuracy = optional_number("acc");
    r.val_loss = optional_number("loss");
    check_record(r, layers, line_no);
    if (!records.empty() && r.epoch <= records.back().epoch)
      throw SchemaError("line " + std::to_string(line_no) + ": epoch " +
                        std::to_string(r.epoch) + " does not follow epoch " +
                        std::to_string(records.back().epoch));
    records.push_back(std::move(r));
  }
  if (records.empty()) throw SchemaError("trace file contains no records");
  return ActivationTrace::make(std::move(run_id), std::move(layers), std::move(records));
}

}  // namespace

ActivationTrace ActivationTrace::make(std::string run_id, std::vector<std::string> layer_names,
                                      std::vector<EpochRecord> epochs) {
  if (layer_names.size() < 2)
    throw SchemaError("a trace needs at least 2 layers, got " +
                      std::to_string(layer_names.size()));
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    check_record(epochs[i], layer_names, 0);
    if (i > 0 && epochs[i].epoch <= epochs[i - 1].epoch)
      throw SchemaError("epoch " + std::to_string(epochs[i].epoch) + " does not follow epoch " +
                        std::to_string(epochs[i - 1].epoch));
  }
  ActivationTrace t;
  t.run_id_ = std::move(run_id);
  t.layer_names_ = std::move(layer_names);
  t.epochs_ = std::move(epochs);
  return t;
}

std::vector<double> ActivationTrace::layer_signal(std::size_t layer) const {
  std::vector<double> x;
  x.reserve(epochs_.size());
  for (const auto& r : epochs_) x.push_back(r.signals.at(layer));
  return x;
}

std::vector<int> ActivationTrace::epoch_numbers() const {
  std::vector<int> e;
  e.reserve(epochs_.size());
  for (const auto& r : epochs_) e.push_back(r.epoch);
  return e;
}

MetricSeries ActivationTrace::accuracy() const {
  MetricSeries s(epochs_.size());
  for (std::size_t i = 0; i < epochs_.size(); ++i) s[i] = epochs_[i].val_accuracy;
  return s;
}

bool ActivationTrace::has_accuracy() const {
  return std::any_of(epochs_.begin(), epochs_.end(),
                     [](const EpochRecord& r) { return r.val_accuracy.has_value(); });
}

TraceFormat parse_trace_format(const std::string& s) {
  if (s == "csv") return TraceFormat::csv;
  if (s == "jsonl") return TraceFormat::jsonl;
  throw DomainError("unknown trace format '" + s + "' (expected csv or jsonl)");
}

TraceFormat guess_trace_format(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".jsonl" || ext == ".ndjson") ? TraceFormat::jsonl : TraceFormat::csv;
}

ActivationTrace parse_trace(std::istream& in, TraceFormat format, std::string run_id) {
  return format == TraceFormat::csv ? parse_csv(in, std::move(run_id))
                                    : parse_jsonl(in, std::move(run_id));
}

ActivationTrace load_trace(const std::filesystem::path& path, TraceFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open trace file '" + path.string() + "'");
  return parse_trace(in, format, path.stem().string());
}

void write_trace(std::ostream& out, const ActivationTrace& trace, TraceFormat format) {
  const bool acc = trace.has_accuracy();
  if (format == TraceFormat::csv) {
    out << "epoch";
    if (acc) out << ",acc";
    for (const auto& name : trace.layer_names()) out << ',' << name;
    out << '\n';
    for (const auto& r : trace.epochs()) {
      out << r.epoch;
      if (acc) out << ',' << (r.val_accuracy ? format_number(*r.val_accuracy) : "");
      for (double v : r.signals) out << ',' << format_number(v);
      out << '\n';
    }
    return;
  }
  for (const auto& r : trace.epochs()) {
    ordered_json obj;
    obj["epoch"] = r.epoch;
    if (r.val_accuracy) obj["acc"] = *r.val_accuracy;
    if (r.val_loss) obj["loss"] = *r.val_loss;
    ordered_json sig = ordered_json::object();
    for (std::size_t l = 0; l < trace.n_layers(); ++l) sig[trace.layer_names()[l]] = r.signals[l];
    obj["signals"] = std::move(sig);
    out << obj.dump() << '\n';
  }
}

void save_trace(const std::filesystem::path& path, const ActivationTrace& trace,
                TraceFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write trace file '" + path.string() + "'");
  write_trace(out, trace, format);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::vector<std::string> validate_trace(const ActivationTrace& trace,
                                        const AnalysisConfig& config) {
  std::vector<std::string> warnings;
  const std::size_t min_prefix = 4 * static_cast<std::size_t>(std::max(config.dfa_min_scale, 1));
  if (trace.n_epochs() < min_prefix) {
    warnings.push_back(std::to_string(trace.n_epochs()) +
                       " epochs: series too short for any DFA estimate before epoch " +
                       std::to_string(min_prefix));
  }
  for (std::size_t l = 0; l < trace.n_layers(); ++l) {
    const auto x = trace.layer_signal(l);
    if (!x.empty() && std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); }))
      warnings.push_back("layer '" + trace.layer_names()[l] +
                         "' is constant; its Hurst exponent and phase are undefined");
  }
  const auto acc = trace.accuracy();
  if (acc.count_present() == 0) {
    warnings.push_back("no validation accuracy recorded: accuracy-dependent diagnostics disabled");
  } else if (acc.count_present() < acc.size()) {
    warnings.push_back(std::to_string(acc.size() - acc.count_present()) +
                       " epoch(s) lack accuracy; they are skipped by r(psi,acc) and plateau "
                       "detection");
  }
  return warnings;
}

}  // namespace traindyn
