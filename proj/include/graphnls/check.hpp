#ifndef GRAPHNLS_CHECK_HPP
#define GRAPHNLS_CHECK_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace graphnls {

struct CheckItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckOptions {
  std::uint64_t seed = 1;
  /// Replaces the L^inf GN constant (and C = c^(p-2)) in the GN slack
  /// checks; values below the true constant must produce failures.
  std::optional<double> inject_c;
};

/// Property suite over all modules, sized to finish in seconds.
std::vector<CheckItem> run_property_checks(const CheckOptions& options = {});

}  // namespace graphnls

#endif  // GRAPHNLS_CHECK_HPP
