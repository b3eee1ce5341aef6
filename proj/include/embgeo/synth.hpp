#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "embgeo/types.hpp"

namespace embgeo {

enum class SynthKind { LinearOffset, GlobalShiftOnly, NeighborPreservingNonlinear, Unstructured };

std::string to_string(SynthKind kind);
SynthKind synth_kind_from_string(const std::string& s);

/// Planted-structure pair generator.
///
/// queries q_i ~ N(0, I_d) in every kind; targets are
///   linear_offset:                 q_i + v + eps_i, eps_i ~ N(0, noise_sigma^2 I)
///   global_shift_only:             q_{pi(i)} + v for a random permutation pi
///   neighbor_preserving_nonlinear: r_i q_i / |q_i|, r_i ~ U[0.5, 2]
///   unstructured:                  independent N(0, I_d)
/// where |v| = offset_norm. v points along a random direction, or along the
/// basis axis `offset_axis` when set.
struct SynthSpec {
  SynthKind kind = SynthKind::LinearOffset;
  std::size_t n = 1000;
  std::size_t d = 64;
  double offset_norm = 4.0;
  double noise_sigma = 0.5;
  std::uint64_t seed = 0;
  std::optional<std::size_t> offset_axis;

  /// InvalidSpec unless n >= 2, d >= 2, noise_sigma >= 0, offset_norm >= 0,
  /// and offset_axis < d.
  void validate() const;
};

/// Everything needed to check the planted property without the probes.
struct GroundTruth {
  SynthSpec spec;
  std::vector<double> offset;            // v; empty for kinds without one
  std::vector<std::size_t> permutation;  // pi for global_shift_only
  std::vector<double> radii;             // r_i for neighbor_preserving_nonlinear
};

struct SynthResult {
  PairedEmbeddings pairs;
  GroundTruth truth;
};

SynthResult generate(const SynthSpec& spec, PairLabels labels = {});

}  // namespace embgeo
