#pragma once

#include <cstddef>
#include <vector>

#include "netmech/common.hpp"

namespace netmech {

// Per-unit observations aligned with a FriendshipNetwork.
struct NetworkData {
  std::vector<double> L;  // binary unless continuous_L
  std::vector<int> A;
  std::vector<int> Y;
  bool continuous_L = false;

  std::size_t size() const { return L.size(); }
  double value(Layer layer, UnitId i) const {
    switch (layer) {
      case Layer::L: return L[i];
      case Layer::A: return A[i];
      case Layer::Y: return Y[i];
    }
    return 0.0;
  }

  // Throws ArgumentError on length mismatch or non-binary A/Y (or L when binary).
  void validate(std::size_t n_units) const;
};

}  // namespace netmech
