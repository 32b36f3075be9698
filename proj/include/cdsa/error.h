#ifndef CDSA_ERROR_H_
#define CDSA_ERROR_H_

#include <stdexcept>
#include <string>

namespace cdsa {

// Bad user input: unreadable files, malformed records, inconsistent
// configuration. The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A domain pair for which a metric has no value (no common polar words,
// zero base entropy, degenerate mean vector). Rankings place such pairs last.
class UnrankablePair : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cdsa

#endif  // CDSA_ERROR_H_
