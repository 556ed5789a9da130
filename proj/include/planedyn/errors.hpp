#pragma once

#include <stdexcept>
#include <string>

namespace planedyn {

// Failure categories surfaced by the library. Operations throw Error with the
// code named in their contract; `detail` carries a clause number where one
// applies (e.g. hypothesis_failed(2)).
enum class ErrorCode {
  point_on_curve,
  not_simple,
  no_escape,
  arc_enters_interior,
  image_hits_basepoint,
  fixed_point_on_curve,
  precondition_violated,
  junction_touches_image,
  cannot_close_arc,
  no_partition,
  not_isolated,
  boundary_fixed_point,
  config_invalid,
  hypothesis_failed,
  eval_outside_grid,
  not_disjoint,
  no_valid_pairing,
  not_compatible,
  not_fixed,
  newton_divergence,
  angle_not_rational,
  ray_unresolved,
  condition_failed,
  non_isolated,
  input_error,
  internal_fault,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, int detail = -1)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const { return code_; }
  int detail() const { return detail_; }

 private:
  ErrorCode code_;
  int detail_;
};

}  // namespace planedyn
