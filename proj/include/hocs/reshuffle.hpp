#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hocs/tensor.hpp"

namespace hocs {

/// Permutation that spreads large-magnitude entries across the reshaped
/// tensor before sketching, plus its inverse for recovery. apply()[dest] =
/// u[forward[dest]], so forward maps destinations to sources.
struct ReshufflePermutation {
  std::vector<std::size_t> forward;  // forward[dest] = src
  std::vector<std::size_t> inverse;  // inverse[src] = dest
  std::vector<std::size_t> shape;
};

/// Builds the spreading permutation for `u` viewed with the given shape:
/// values are ranked by descending magnitude-free value (ties broken by
/// original index), then ranks are laid out over the tensor cells diagonal by
/// diagonal of constant index sum, walking each diagonal in lexicographic
/// index order and reversing direction on odd diagonals.
ReshufflePermutation build_reshuffle(std::span<const double> u, std::vector<std::size_t> shape);

std::vector<double> apply(const ReshufflePermutation& perm, std::span<const double> u);
std::vector<double> invert(const ReshufflePermutation& perm, std::span<const double> v);

}  // namespace hocs
