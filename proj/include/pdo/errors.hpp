#pragma once

#include <stdexcept>
#include <string>

namespace pdo {

enum class ErrorKind { shape, parameter, capability, lookup, inversion, conditioning, io };

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }
  // Same kind, message prefixed with the pipeline stage that raised it.
  [[noreturn]] void rethrow_in_stage(const std::string& stage) const;

 private:
  ErrorKind kind_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& m) : Error(ErrorKind::shape, m) {}
};
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& m) : Error(ErrorKind::parameter, m) {}
};
class CapabilityError : public Error {
 public:
  explicit CapabilityError(const std::string& m) : Error(ErrorKind::capability, m) {}
};
class LookupError : public Error {
 public:
  explicit LookupError(const std::string& m) : Error(ErrorKind::lookup, m) {}
};
class InversionError : public Error {
 public:
  explicit InversionError(const std::string& m) : Error(ErrorKind::inversion, m) {}
};
class ConditioningError : public Error {
 public:
  explicit ConditioningError(const std::string& m) : Error(ErrorKind::conditioning, m) {}
};
class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorKind::io, m) {}
};

}  // namespace pdo
