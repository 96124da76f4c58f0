#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fcagenda {

// Base of every error the library throws on bad input or violated
// preconditions. Programming errors inside the library still use assert.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: CSV, model files, agenda files, invalid arguments.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A categorical value that the scaling spec has never seen.
class UnknownValueError : public Error {
 public:
  using Error::Error;
};

class ConceptCapExceeded : public Error {
 public:
  ConceptCapExceeded(std::size_t cap, std::size_t count, const std::string& where = {})
      : Error("concept cap exceeded" + (where.empty() ? std::string() : " for " + where) +
              ": more than " + std::to_string(cap) + " concepts (" + std::to_string(count) +
              " enumerated before stopping)"),
        cap_(cap),
        count_(count) {}

  std::size_t cap() const noexcept { return cap_; }
  std::size_t partial_count() const noexcept { return count_; }

 private:
  std::size_t cap_;
  std::size_t count_;
};

}  // namespace fcagenda

namespace fcagenda {

// |sum of weights| fell below the configured guard in the ensemble quotient.
class GuardViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace fcagenda
