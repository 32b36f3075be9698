#include "cdsa/csv.h"

#include "cdsa/error.h"

namespace cdsa::csv {

std::optional<std::vector<std::string>> Reader::next() {
  std::string raw;
  while (std::getline(in_, raw)) {
    ++line_;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;

    record_line_ = line_;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (;;) {
      for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (quoted) {
          if (c == '"') {
            if (i + 1 < raw.size() && raw[i + 1] == '"') {
              field += '"';
              ++i;
            } else {
              quoted = false;
            }
          } else {
            field += c;
          }
        } else if (c == '"' && field.empty() && !was_quoted) {
          quoted = true;
          was_quoted = true;
        } else if (c == ',') {
          fields.push_back(std::move(field));
          field.clear();
          was_quoted = false;
        } else {
          field += c;
        }
      }
      if (!quoted) break;
      // Quoted field continues on the next physical line.
      if (!std::getline(in_, raw)) {
        throw InputError("line " + std::to_string(record_line_) +
                         ": unterminated quoted field");
      }
      ++line_;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      field += '\n';
    }
    fields.push_back(std::move(field));
    return fields;
  }
  return std::nullopt;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  return out;
}

}  // namespace cdsa::csv
