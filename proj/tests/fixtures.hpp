#pragma once

#include <utility>
#include <vector>

#include "netmech/network.hpp"

namespace fixtures {

using netmech::FriendshipNetwork;
using netmech::UnitId;

// The ten-unit example network; ids 1..10 are used as given and unit 0 is an unused isolate.
// Unit 3 is isolated as well.
inline FriendshipNetwork figure1a() {
  const std::vector<std::pair<UnitId, UnitId>> e{{4, 2}, {5, 2}, {4, 5}, {6, 7}, {6, 8},
                                                 {9, 10}, {5, 6}, {8, 10}, {1, 2}};
  return FriendshipNetwork(11, e);
}

inline FriendshipNetwork path(std::size_t n) {
  std::vector<std::pair<UnitId, UnitId>> e;
  for (UnitId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return FriendshipNetwork(n, e);
}

inline FriendshipNetwork complete(std::size_t n) {
  std::vector<std::pair<UnitId, UnitId>> e;
  for (UnitId i = 0; i < n; ++i) {
    for (UnitId j = i + 1; j < n; ++j) e.push_back({i, j});
  }
  return FriendshipNetwork(n, e);
}

inline FriendshipNetwork edgeless(std::size_t n) {
  return FriendshipNetwork(n, std::vector<std::pair<UnitId, UnitId>>{});
}

}  // namespace fixtures
