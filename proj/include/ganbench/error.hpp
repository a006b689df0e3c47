#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace ganbench {

// Operational failure: bad inputs, missing files, contract violations.
// The CLI maps uncaught Error to exit code 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

template <typename... Args>
[[noreturn]] void fail(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  throw Error(os.str());
}

template <typename... Args>
void require(bool cond, Args&&... args) {
  if (!cond) fail(std::forward<Args>(args)...);
}

}  // namespace ganbench
