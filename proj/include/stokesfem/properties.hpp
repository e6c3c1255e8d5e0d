#pragma once

#include <string>
#include <vector>

#include "stokesfem/study.hpp"

namespace stokesfem {

struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Executes the invariant suite of every module on n in {2, 4} with the
/// configured (k, l) pair: mesh/quadrature/basis identities, unisolvence and
/// conformity of the spaces, the commuting identities of the interpolation
/// operators, the weak-gradient projection identities, solver invariants on
/// the configured example, and the postprocessing constraints.
std::vector<PropertyResult> run_property_suite(const RunConfig& config);

/// Serializes results (plus the run configuration and mesh convention) as
/// JSON; one entry per named invariant.
std::string properties_to_json(const std::vector<PropertyResult>& results,
                               const RunConfig& config);

}  // namespace stokesfem
