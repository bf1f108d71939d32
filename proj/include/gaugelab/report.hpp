#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gaugelab {

enum class Verdict { pass, fail, skipped };

std::string_view to_string(Verdict v);

/// Concrete data reproducing a violation (functions, sets, parameters).
struct Witness {
  std::string description;
  std::vector<std::pair<std::string, std::vector<double>>> fields;

  Witness& add(std::string name, std::vector<double> values) {
    fields.emplace_back(std::move(name), std::move(values));
    return *this;
  }
  Witness& add(std::string name, double value) { return add(std::move(name), std::vector<double>{value}); }
  /// Throws std::out_of_range when absent.
  const std::vector<double>& get(std::string_view name) const;
};

struct AxiomResult {
  AxiomResult() = default;
  explicit AxiomResult(std::string n) : name(std::move(n)) {}

  std::string name;
  Verdict verdict = Verdict::pass;
  std::optional<double> constant;  // estimated constant, when the axiom has one
  std::size_t checks = 0;
  std::size_t skipped = 0;
  std::string note;
  std::vector<std::pair<std::string, double>> values;  // auxiliary tables (u_E, delta(eps), ...)
  std::optional<Witness> witness;

  bool passed() const { return verdict != Verdict::fail; }
};

class AxiomReport {
 public:
  AxiomReport() = default;
  explicit AxiomReport(std::string subject) : subject_(std::move(subject)) {}

  const std::string& subject() const { return subject_; }
  AxiomResult& add(AxiomResult r) { return results_.emplace_back(std::move(r)); }
  const std::vector<AxiomResult>& results() const { return results_; }
  bool passed() const;
  std::size_t failures() const;
  /// Throws std::out_of_range for unknown names.
  const AxiomResult& at(std::string_view name) const;
  bool contains(std::string_view name) const;

 private:
  std::string subject_;
  std::vector<AxiomResult> results_;
};

}  // namespace gaugelab
