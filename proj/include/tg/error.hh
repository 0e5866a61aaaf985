// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <stdexcept>
#include <string>

namespace tg {

// Every failure the library reports carries a short machine-readable code
// ("parse", "range", "io", "memory", ...) next to the human message. The CLI
// prints both on a single line.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

inline Error parse_error(const std::string& m) { return Error("parse", m); }
inline Error range_error(const std::string& m) { return Error("range", m); }
inline Error io_error(const std::string& m) { return Error("io", m); }
inline Error invalid_argument(const std::string& m) {
  return Error("invalid-argument", m);
}

}  // namespace tg
