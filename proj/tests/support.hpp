#pragma once

#include <string>
#include <vector>

#include "ftile/graph.hpp"

namespace ftile::testing {

std::string fixture_path(const std::string &name);
IFSystem fixture(const std::string &name);
const std::vector<std::string> &fixture_names();

/// Power-mode system built from a polynomial, lambda coordinates and digits
/// given as (s, v) coordinate pairs; an empty s means the identity.
IFSystem power_system(const std::vector<long> &poly, const std::vector<long> &lambda,
                      const std::vector<std::pair<std::vector<long>, std::vector<long>>> &digits);

IntVector ivec(const std::vector<long> &v);
IntMatrix imat(const std::vector<std::vector<long>> &rows);

} // namespace ftile::testing
