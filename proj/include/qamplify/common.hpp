#ifndef QAMPLIFY_COMMON_HPP
#define QAMPLIFY_COMMON_HPP

#include <stdexcept>
#include <string>

namespace qamplify {

inline constexpr const char *kVersion = "0.1.0";

// Error taxonomy maps 1:1 onto the process exit-code contract:
//   SchemaError -> 2 (usage / malformed input), DataError -> 3 (bad data),
//   NumericError -> 4 (numeric failure).
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qamplify

#endif
