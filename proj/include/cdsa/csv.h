#ifndef CDSA_CSV_H_
#define CDSA_CSV_H_

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdsa::csv {

// RFC 4180 style reader. Quoted fields may contain separators, doubled
// quotes and newlines.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next record, or nullopt at end of input. Blank lines are skipped.
  std::optional<std::vector<std::string>> next();

  // 1-based line on which the last returned record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

}  // namespace cdsa::csv

#endif  // CDSA_CSV_H_
