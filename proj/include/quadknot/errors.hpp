#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace quadknot {

// Every failure raised by the library derives from Error. The CLI maps the
// category onto its exit codes.
class Error : public std::runtime_error {
 public:
  enum class Category { Input, Genericity, Invariant, Usage };

  Error(Category category, std::string kind, const std::string& what)
      : std::runtime_error(what), category_(category), kind_(std::move(kind)) {}

  Category category() const { return category_; }
  const std::string& kind() const { return kind_; }

 private:
  Category category_;
  std::string kind_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what)
      : Error(Category::Input, "ParseError", what) {}
};

// Raised when an input polygon is not a valid knot. `indices` names the
// offending vertices or edges.
class DegenerateInput : public Error {
 public:
  DegenerateInput(const std::string& what, std::vector<int> indices = {})
      : Error(Category::Input, "DegenerateInput", what), indices_(std::move(indices)) {}
  const std::vector<int>& indices() const { return indices_; }

 private:
  std::vector<int> indices_;
};

class SkewViolation : public Error {
 public:
  explicit SkewViolation(const std::string& what)
      : Error(Category::Genericity, "SkewViolation", what) {}
};

class GenericityViolation : public Error {
 public:
  explicit GenericityViolation(const std::string& what)
      : Error(Category::Genericity, "GenericityViolation", what) {}
};

class QuintisecantFound : public Error {
 public:
  QuintisecantFound(const std::string& what, int components)
      : Error(Category::Genericity, "QuintisecantFound", what), components_(components) {}
  int components() const { return components_; }

 private:
  int components_;
};

class CoincidentPoints : public Error {
 public:
  explicit CoincidentPoints(const std::string& what)
      : Error(Category::Usage, "CoincidentPoints", what) {}
};

class PerturbationFailed : public Error {
 public:
  explicit PerturbationFailed(const std::string& what)
      : Error(Category::Genericity, "PerturbationFailed", what) {}
};

class IsotopyUnsafe : public Error {
 public:
  explicit IsotopyUnsafe(const std::string& what)
      : Error(Category::Usage, "IsotopyUnsafe", what) {}
};

class DegenerateVertex : public Error {
 public:
  explicit DegenerateVertex(const std::string& what)
      : Error(Category::Input, "DegenerateVertex", what) {}
};

class NotAlternating : public Error {
 public:
  explicit NotAlternating(const std::string& what)
      : Error(Category::Usage, "NotAlternating", what) {}
};

class GluingFailure : public Error {
 public:
  GluingFailure(const std::string& what, int unmatched)
      : Error(Category::Invariant, "GluingFailure", what), unmatched_(unmatched) {}
  int unmatched() const { return unmatched_; }

 private:
  int unmatched_;
};

class TriplePointFound : public Error {
 public:
  explicit TriplePointFound(const std::string& what)
      : Error(Category::Invariant, "TriplePointFound", what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(Category::Usage, "InvalidArgument", what) {}
};

}  // namespace quadknot
