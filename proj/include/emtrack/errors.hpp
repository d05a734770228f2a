#pragma once

#include <stdexcept>
#include <string>

namespace emtrack {

// Base class so callers can catch everything emtrack throws with one handler.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define EMTRACK_DEFINE_ERROR(Name)                       \
  struct Name : Error {                                  \
    explicit Name(const std::string& msg) : Error(msg) {} \
  }

EMTRACK_DEFINE_ERROR(ValueError);       // non-positive / non-finite inputs
EMTRACK_DEFINE_ERROR(GeometryError);    // scenario ordering, receiver placement
EMTRACK_DEFINE_ERROR(KindError);        // operation called on the wrong source kind
EMTRACK_DEFINE_ERROR(DomainError);      // argument outside mathematical domain
EMTRACK_DEFINE_ERROR(IndexError);       // (n,m) out of range
EMTRACK_DEFINE_ERROR(AliasError);       // expansion degree exceeds grid band-limit
EMTRACK_DEFINE_ERROR(GridMismatch);     // traces on incompatible grids
EMTRACK_DEFINE_ERROR(WindowError);      // record window too short
EMTRACK_DEFINE_ERROR(RegionError);      // evanescent probe outside admissible region
EMTRACK_DEFINE_ERROR(NotFoundError);    // scan found nothing (degenerate h)
EMTRACK_DEFINE_ERROR(CoverageError);    // frequency coverage insufficient
EMTRACK_DEFINE_ERROR(InfeasibleError);  // moment data inconsistent
EMTRACK_DEFINE_ERROR(HypothesisError);  // recovered data violates theorem hypothesis
EMTRACK_DEFINE_ERROR(MaxIterError);     // optimizer iteration cap
EMTRACK_DEFINE_ERROR(NoSignalError);    // detector floor
EMTRACK_DEFINE_ERROR(NoRootError);      // localization has no feasible root
EMTRACK_DEFINE_ERROR(OverlapError);     // impulse windows overlap
EMTRACK_DEFINE_ERROR(DegenerateError);  // collinear receiver triple
EMTRACK_DEFINE_ERROR(ConfigError);      // configuration file problems
EMTRACK_DEFINE_ERROR(IoError);          // file format / checksum problems

#undef EMTRACK_DEFINE_ERROR

}  // namespace emtrack
