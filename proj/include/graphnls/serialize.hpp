#ifndef GRAPHNLS_SERIALIZE_HPP
#define GRAPHNLS_SERIALIZE_HPP

#include <json.hpp>

#include "graphnls/analysis.hpp"
#include "graphnls/solver.hpp"

namespace graphnls {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const EnergyReport& report);
nlohmann::json to_json(const ELReport& report);
nlohmann::json to_json(const MinimizationResult& result);
nlohmann::json to_json(const DichotomyResult& result);
nlohmann::json to_json(const ThresholdReport& report);
nlohmann::json to_json(const NonexistenceCertificate& cert, const MetricGraph& graph);

}  // namespace graphnls

#endif  // GRAPHNLS_SERIALIZE_HPP
