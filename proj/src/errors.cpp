#include "pdo/errors.hpp"

namespace pdo {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::shape: return "shape";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::capability: return "capability";
    case ErrorKind::lookup: return "lookup";
    case ErrorKind::inversion: return "inversion";
    case ErrorKind::conditioning: return "conditioning";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

void Error::rethrow_in_stage(const std::string& stage) const {
  std::string m = stage + ": " + what();
  switch (kind_) {
    case ErrorKind::shape: throw ShapeError(m);
    case ErrorKind::parameter: throw ParameterError(m);
    case ErrorKind::capability: throw CapabilityError(m);
    case ErrorKind::lookup: throw LookupError(m);
    case ErrorKind::inversion: throw InversionError(m);
    case ErrorKind::conditioning: throw ConditioningError(m);
    case ErrorKind::io: throw IoError(m);
  }
  throw Error(kind_, m);
}

}  // namespace pdo
