#pragma once

#include <stdexcept>
#include <string>

namespace locomanip {

// Base of every error thrown by the library. Callers that only care about
// "something went wrong in locomanip" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class InvalidMap : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class InfeasibleEncoding : public Error {
 public:
  using Error::Error;
};

// Thrown by the exhaustive oracle when its enumeration guard fails.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class EmptySet : public Error {
 public:
  using Error::Error;
};

class EmptyIndex : public Error {
 public:
  using Error::Error;
};

class FingerprintMismatch : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace locomanip
