#pragma once

#include <stdexcept>
#include <string>

namespace tdesign {

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  dimension_cap,
  degenerate_state,
  singular_system,
  not_a_design,
  no_closed_form,
  divergent,
  optimizer_failure,
  parse_error,
};

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tdesign
