#ifndef SETRISK_ERROR_HPP
#define SETRISK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace setrisk {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what) {}
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

/// Operation called outside its domain (empty polyhedron, t >= s, ...).
class PreconditionViolation : public Error {
 public:
  explicit PreconditionViolation(const std::string& what) : Error(what) {}
};

/// A dual weight that vanishes on every eligible coordinate.
class OrthogonalWeight : public Error {
 public:
  explicit OrthogonalWeight(const std::string& what)
      : Error("weight lies in the annihilator of the eligible space: " + what) {}
};

/// Recursion produced an empty set: the model admits no finite compensation.
class ModelInconsistency : public Error {
 public:
  explicit ModelInconsistency(const std::string& what) : Error(what) {}
};

}  // namespace setrisk

#endif  // SETRISK_ERROR_HPP
