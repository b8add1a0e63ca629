#pragma once

#include <stdexcept>
#include <string>

namespace finitude {

/// Bad input: malformed data, violated preconditions, size gates.
class precondition_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size gate was exceeded (closure bound, bisection enumeration, ...).
class size_error : public precondition_error {
 public:
  using precondition_error::precondition_error;
};

/// An identity that must hold by construction failed. Always a bug.
class verification_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw precondition_error(what);
}

inline void ensure(bool ok, const std::string& what) {
  if (!ok) throw verification_error(what);
}

}  // namespace finitude
