#pragma once

#include <stdexcept>
#include <string>

namespace zzvine {

enum class ErrorKind {
  ContractViolation,
  Validation,
  Parse,
  IllegalSwitch,
  IllegalExpansion,
  IllegalContraction,
  IllegalTransposition,
  UnsupportedOnFzzPath,
  Exhausted,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, int position = -1)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what),
        kind_(kind),
        position_(position) {}

  ErrorKind kind() const { return kind_; }
  // step position or input line the error refers to, -1 if none
  int position() const { return position_; }

 private:
  ErrorKind kind_;
  int position_;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::ContractViolation, what);
}

}  // namespace zzvine
