#include "cdsa/metric.h"

#include <charconv>
#include <istream>
#include <ostream>

#include "cdsa/csv.h"
#include "cdsa/error.h"
#include "numfmt.h"

namespace cdsa {

std::string_view to_string(MetricId id) {
  switch (id) {
    case MetricId::kLM1: return "LM1";
    case MetricId::kLM2: return "LM2";
    case MetricId::kLM3: return "LM3";
    case MetricId::kLM4: return "LM4";
    case MetricId::kULM1: return "ULM1";
    case MetricId::kULM2: return "ULM2";
    case MetricId::kULM3: return "ULM3";
    case MetricId::kULM4: return "ULM4";
    case MetricId::kULM5: return "ULM5";
    case MetricId::kULM6: return "ULM6";
    case MetricId::kULM7: return "ULM7";
    case MetricId::kNGRAM: return "NGRAM";
  }
  return "?";
}

std::string_view to_string(Direction d) {
  return d == Direction::kHigherIsMoreSimilar ? "higher_is_more_similar"
                                              : "lower_is_more_similar";
}

std::optional<MetricId> parse_metric(std::string_view name) {
  for (MetricId id : kAllMetrics) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

Direction direction_of(MetricId id) {
  switch (id) {
    case MetricId::kLM2:
    case MetricId::kLM3:
    case MetricId::kLM4:
      return Direction::kLowerIsMoreSimilar;
    default:
      return Direction::kHigherIsMoreSimilar;
  }
}

bool is_labelled(MetricId id) {
  return id == MetricId::kLM1 || id == MetricId::kLM2 ||
         id == MetricId::kLM3 || id == MetricId::kLM4;
}

bool uses_word_vectors(MetricId id) {
  return id == MetricId::kULM1 || id == MetricId::kULM3 ||
         id == MetricId::kULM4 || id == MetricId::kULM6;
}

bool uses_sentence_vectors(MetricId id) {
  return id == MetricId::kULM2 || id == MetricId::kULM5 ||
         id == MetricId::kULM7;
}

void write_metric_csv(std::ostream& out, std::span<const MetricResult> rows) {
  out << "metric_id,source,target,value,direction\n";
  for (const MetricResult& r : rows) {
    out << csv::join({std::string(to_string(r.metric)), r.source, r.target,
                      r.value ? internal::format_exact(*r.value) : "NA",
                      std::string(to_string(r.direction()))})
        << '\n';
  }
}

std::vector<MetricResult> read_metric_csv(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || header->size() != 5 || (*header)[0] != "metric_id") {
    throw InputError(
        "metric CSV must start with metric_id,source,target,value,direction");
  }
  std::vector<MetricResult> rows;
  while (auto fields = reader.next()) {
    const std::string where = "line " + std::to_string(reader.line()) + ": ";
    if (fields->size() != 5) throw InputError(where + "expected 5 fields");
    MetricResult r;
    auto id = parse_metric((*fields)[0]);
    if (!id) throw InputError(where + "unknown metric '" + (*fields)[0] + "'");
    r.metric = *id;
    r.source = (*fields)[1];
    r.target = (*fields)[2];
    const std::string& v = (*fields)[3];
    if (v != "NA") {
      double x = 0;
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
      if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw InputError(where + "bad value '" + v + "'");
      }
      r.value = x;
    }
    if ((*fields)[4] != to_string(r.direction())) {
      throw InputError(where + "direction does not match metric " +
                       (*fields)[0]);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace cdsa
