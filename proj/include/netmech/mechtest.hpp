#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "netmech/glm.hpp"
#include "netmech/sgraph.hpp"

namespace netmech {

enum class TestStatus { Ok, InsufficientSample, FitFailed };

std::string_view to_string(TestStatus s);

// Coding likelihood ratio test of contagion (null) against latent confounding in one layer.
struct LayerTestResult {
  Layer layer = Layer::L;
  TestStatus status = TestStatus::Ok;
  double lr_statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  std::optional<Mechanism> decision;  // set only when status == Ok
  std::size_t effective_sample_size = 0;
  FitResult null_fit;
  FitResult alternative_fit;
  std::string diagnostic;
};

// `sep` must be a 6-separated set restricted to units with non-empty rings 1 and 2.
LayerTestResult test_layer(const FriendshipNetwork& net, const NetworkData& data, Layer layer,
                           double alpha, const SeparatedSet& sep, const FitConfig& fit = {});

struct MechanismReport {
  SegregatedGraphSpec spec;  // Unknown where the layer test failed
  std::array<LayerTestResult, 3> layers;
  SeparatedSet separated_set;
  bool complete() const { return spec.fully_determined(); }
};

// Runs all three layer tests on one shared maximal 6-separated set.
MechanismReport determine_mechanisms(const FriendshipNetwork& net, const NetworkData& data,
                                     double alpha, std::size_t restarts, std::uint64_t seed,
                                     const FitConfig& fit = {});

// Same, on a caller-supplied separated set.
MechanismReport determine_mechanisms(const FriendshipNetwork& net, const NetworkData& data,
                                     double alpha, const SeparatedSet& sep,
                                     const FitConfig& fit = {});

}  // namespace netmech
