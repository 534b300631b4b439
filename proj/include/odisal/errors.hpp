#pragma once

#include <stdexcept>
#include <string>

namespace odisal {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroMassError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatchError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class InvalidFovError : public Error {
 public:
  using Error::Error;
};

class InvalidIntervalError : public Error {
 public:
  using Error::Error;
};

class UnsupportedModeError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class BiasShapeMismatchError : public Error {
 public:
  using Error::Error;
};

class MissingLatitudeError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class ZeroVarianceError : public Error {
 public:
  using Error::Error;
};

class NoFixationsError : public Error {
 public:
  using Error::Error;
};

class DegenerateSetError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// File-format violation; message carries `path:line`.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Value outside its documented range; message carries `path:line`.
class RangeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace odisal
