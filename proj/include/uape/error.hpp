#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace uape {

// Problems in user-supplied data (files, flags, config values). The CLI maps
// these to exit code 2; std::logic_error (internal assertions) maps to 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail_at_line(std::string_view source, std::size_t line,
                                      const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  throw DataError(msg.str());
}

}  // namespace uape

// Internal invariant check; a failure is a bug, not a data problem.
#define UAPE_ASSERT(cond, msg)                                              \
  do {                                                                      \
    if (!(cond)) throw std::logic_error(std::string("internal: ") + (msg)); \
  } while (0)
