#ifndef FOCKPART_ERRORS_HPP
#define FOCKPART_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fockpart {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A parameter violated an operation's precondition.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

/// A series or quadrature failed to converge within its budget.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error(what) {}
};

/// The Fock cutoff is too small for the requested tail tolerance.
class CutoffError : public Error {
 public:
  CutoffError(const std::string& what, int suggested)
      : Error(what), suggested_dim(suggested) {}
  int suggested_dim;
};

/// Operation on a state whose total weight vanished (e.g. a|0> = 0).
class DegenerateStateError : public Error {
 public:
  explicit DegenerateStateError(const std::string& what) : Error(what) {}
};

namespace detail {
inline void require(bool cond, const std::string& what) {
  if (!cond) throw DomainError(what);
}
}  // namespace detail

}  // namespace fockpart

#endif  // FOCKPART_ERRORS_HPP
