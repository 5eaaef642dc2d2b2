#pragma once

#include <stdexcept>
#include <string>

namespace dzak {

/// Owning subsystem of an error; selects the CLI exit-code range.
enum class ErrorDomain {
  Config = 10,
  Spectral = 20,
  Solver = 30,
  Verification = 40,
  Counterexample = 50,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorDomain domain, int detail, const std::string& what)
      : std::runtime_error(what), domain_(domain), detail_(detail) {}

  ErrorDomain domain() const noexcept { return domain_; }
  // Offset inside the domain's range, 0..9.
  int detail() const noexcept { return detail_; }
  int exit_code() const noexcept { return static_cast<int>(domain_) + detail_; }

 private:
  ErrorDomain domain_;
  int detail_;
};

// Detail codes shared by the modules.
namespace errc {
inline constexpr int precondition = 0;
inline constexpr int representation = 1;
inline constexpr int bandwidth = 2;
inline constexpr int support = 3;
inline constexpr int numerical = 4;
inline constexpr int precision = 5;
inline constexpr int io = 6;
inline constexpr int check_failed = 9;
}  // namespace errc

[[noreturn]] inline void fail(ErrorDomain domain, int detail, const std::string& what) {
  throw Error(domain, detail, what);
}

inline void require(bool cond, ErrorDomain domain, int detail, const std::string& what) {
  if (!cond) fail(domain, detail, what);
}

}  // namespace dzak
