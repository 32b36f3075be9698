#ifndef CDSA_METRIC_H_
#define CDSA_METRIC_H_

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cdsa {

enum class MetricId {
  kLM1,  // significant words overlap
  kLM2,  // symmetric KL divergence of polar words + 1/J
  kLM3,  // chameleon words (L1 polarity drift) + 1/J
  kLM4,  // weighted n-gram entropy change after mixing
  kULM1, kULM2, kULM3, kULM4, kULM5, kULM6, kULM7,
  kNGRAM,  // top-k n-gram overlap
};

inline constexpr std::array<MetricId, 12> kAllMetrics = {
    MetricId::kLM1,  MetricId::kLM2,  MetricId::kLM3,  MetricId::kLM4,
    MetricId::kULM1, MetricId::kULM2, MetricId::kULM3, MetricId::kULM4,
    MetricId::kULM5, MetricId::kULM6, MetricId::kULM7, MetricId::kNGRAM};

enum class Direction { kHigherIsMoreSimilar, kLowerIsMoreSimilar };

std::string_view to_string(MetricId id);
std::string_view to_string(Direction d);
std::optional<MetricId> parse_metric(std::string_view name);

Direction direction_of(MetricId id);
bool is_labelled(MetricId id);
// ULM1/3/4/6 compare word vectors; ULM2/5/7 compare sentence vectors.
bool uses_word_vectors(MetricId id);
bool uses_sentence_vectors(MetricId id);

// One metric value for an ordered (source, target) pair. An empty value marks
// an unrankable pair.
struct MetricResult {
  MetricId metric = MetricId::kLM1;
  std::string source;
  std::string target;
  std::optional<double> value;

  Direction direction() const { return direction_of(metric); }
};

// Header: metric_id,source,target,value,direction. Unrankable values are
// written as "NA". Values use the shortest round-trip representation.
void write_metric_csv(std::ostream& out, std::span<const MetricResult> rows);
std::vector<MetricResult> read_metric_csv(std::istream& in);

}  // namespace cdsa

#endif  // CDSA_METRIC_H_
