#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace contrastgen {

// Base for every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotJson : public Error {
 public:
  explicit NotJson(const std::string& detail) : Error("input is not valid JSON: " + detail) {}
};

class InconsistentPlural : public Error {
 public:
  explicit InconsistentPlural(std::string term)
      : Error("term '" + term + "' maps to more than one plural form"), term_(std::move(term)) {}
  const std::string& term() const { return term_; }

 private:
  std::string term_;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class DuplicateKey : public Error {
 public:
  explicit DuplicateKey(std::string key) : Error("duplicate key '" + key + "'"), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class MissingPrediction : public Error {
 public:
  explicit MissingPrediction(std::vector<std::string> keys);
  const std::vector<std::string>& keys() const { return keys_; }

 private:
  std::vector<std::string> keys_;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace contrastgen
