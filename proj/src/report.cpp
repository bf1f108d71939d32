#include "gaugelab/report.hpp"

#include <algorithm>
#include <stdexcept>

namespace gaugelab {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::skipped:
      return "skipped";
  }
  return "unknown";
}

const std::vector<double>& Witness::get(std::string_view name) const {
  for (const auto& [key, values] : fields) {
    if (key == name) return values;
  }
  throw std::out_of_range("Witness: no field '" + std::string(name) + "'");
}

bool AxiomReport::passed() const { return failures() == 0; }

std::size_t AxiomReport::failures() const {
  return static_cast<std::size_t>(std::count_if(results_.begin(), results_.end(),
                                                [](const AxiomResult& r) { return !r.passed(); }));
}

const AxiomResult& AxiomReport::at(std::string_view name) const {
  for (const auto& r : results_) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("AxiomReport '" + subject_ + "': no axiom '" + std::string(name) + "'");
}

bool AxiomReport::contains(std::string_view name) const {
  return std::any_of(results_.begin(), results_.end(),
                     [&](const AxiomResult& r) { return r.name == name; });
}

}  // namespace gaugelab
