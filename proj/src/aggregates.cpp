#include <streamseal/aggregates.hpp>

#include <json.hpp>

#include <streamseal/decimal.hpp>
#include <streamseal/errors.hpp>
#include <streamseal/json_canon.hpp>

namespace streamseal {

Aggregates compute_aggregates(const std::vector<std::string>& canonical_lines) {
  if (canonical_lines.empty()) {
    throw EmptyWindowError("cannot aggregate an empty window");
  }

  Aggregates agg;
  Decimal sum;
  double min_value = 0.0;
  double max_value = 0.0;
  for (const auto& line : canonical_lines) {
    auto obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("temperature") ||
        !obj["temperature"].is_number()) {
      throw ParseError("record has no numeric temperature: " + line);
    }
    double value = obj["temperature"].get<double>();
    std::string rendering = canonical_number(value);
    sum = add(sum, parse_decimal(rendering));
    if (agg.count == 0 || value < min_value) {
      min_value = value;
      agg.min = rendering;
    }
    if (agg.count == 0 || value > max_value) {
      max_value = value;
      agg.max = rendering;
    }
    ++agg.count;
  }
  agg.avg = render_mean(sum, agg.count);
  return agg;
}

std::string aggregate_row(const std::string& scope, const std::string& window_id,
                          const Aggregates& aggregates) {
  std::string row = "{\"avg\":";
  row += aggregates.avg;
  row += ",\"count\":";
  row += std::to_string(aggregates.count);
  row += ",\"max\":";
  row += aggregates.max;
  row += ",\"min\":";
  row += aggregates.min;
  row += ",\"scope\":";
  append_canonical_string(row, scope);
  row += ",\"windowId\":";
  append_canonical_string(row, window_id);
  row += "}";
  return row;
}

}  // namespace streamseal
