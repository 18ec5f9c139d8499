#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace matchadapt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A raw instance violates one or more structural invariants. Every violation
/// found is reported, not only the first one.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class NotAcceptable : public Error {
 public:
  using Error::Error;
};

class InvalidNotion : public Error {
 public:
  using Error::Error;
};

class NoStableMatching : public Error {
 public:
  NoStableMatching() : Error("instance admits no stable matching") {}
};

class RotationNotExposed : public Error {
 public:
  using Error::Error;
};

class NotClosedComplete : public Error {
 public:
  using Error::Error;
};

class NotStable : public Error {
 public:
  using Error::Error;
};

class SingularRotation : public Error {
 public:
  using Error::Error;
};

class ResourceExhausted : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class WindowUnsatisfiable : public Error {
 public:
  using Error::Error;
};

class ForcedForbiddenOverlap : public Error {
 public:
  ForcedForbiddenOverlap() : Error("a pair is both forced and forbidden") {}
};

}  // namespace matchadapt
