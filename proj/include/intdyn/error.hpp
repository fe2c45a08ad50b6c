#pragma once

#include <stdexcept>
#include <string>

namespace intdyn {

enum class Err {
  out_of_domain,
  no_piece,
  non_differentiable,
  out_of_range,
  invalid_system,
  index_out_of_range,
  arity_mismatch,
  entry_cap_exceeded,
  grid_mismatch,
  tail_unbounded,
  quadrature_failure,
  non_convergence,
  orbit_escape,
  unknown_entry,
  parse_error,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::out_of_domain: return "OutOfDomain";
    case Err::no_piece: return "NoPiece";
    case Err::non_differentiable: return "NonDifferentiable";
    case Err::out_of_range: return "OutOfRange";
    case Err::invalid_system: return "InvalidSystem";
    case Err::index_out_of_range: return "IndexOutOfRange";
    case Err::arity_mismatch: return "ArityMismatch";
    case Err::entry_cap_exceeded: return "EntryCapExceeded";
    case Err::grid_mismatch: return "GridMismatch";
    case Err::tail_unbounded: return "TailUnbounded";
    case Err::quadrature_failure: return "QuadratureFailure";
    case Err::non_convergence: return "NonConvergence";
    case Err::orbit_escape: return "OrbitEscape";
    case Err::unknown_entry: return "UnknownEntry";
    case Err::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Library-wide exception type; `kind` identifies the contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(Err kind, const std::string& msg)
      : std::runtime_error(std::string(err_name(kind)) + ": " + msg), kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

}  // namespace intdyn
