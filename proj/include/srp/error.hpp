#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace srp {

/// Failure categories. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  validation = 1,   ///< bad input, out-of-range argument, size cap exceeded
  certificate = 2,  ///< a numeric error bound could not be met
  io = 3,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::certificate: return "certificate";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class CertificateError : public Error {
 public:
  explicit CertificateError(const std::string& what) : Error(ErrorKind::certificate, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

/// Short numeric form for messages.
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace srp
