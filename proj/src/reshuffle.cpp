#include "hocs/reshuffle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hocs {

ReshufflePermutation build_reshuffle(std::span<const double> u, std::vector<std::size_t> shape) {
  const std::size_t total = detail::checked_product(shape);
  if (u.size() != total) throw std::invalid_argument("input length does not match shape");
  const std::size_t l = shape.size();

  // Sources ranked by descending value, ties by original index.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return u[a] > u[b]; });

  // Destination cells grouped by index sum; lexicographic within a diagonal
  // (mode 0 most significant), reversed on odd diagonals.
  struct Cell {
    std::size_t diag;
    std::vector<std::size_t> idx;
    std::size_t flat;
  };
  std::vector<Cell> cells;
  cells.reserve(total);
  std::vector<std::size_t> idx(l, 0);
  std::vector<std::size_t> stride(l, 1);
  for (std::size_t k = 1; k < l; ++k) stride[k] = stride[k - 1] * shape[k - 1];
  std::size_t flat = 0;
  do {
    std::size_t sum = 0;
    for (std::size_t v : idx) sum += v;
    cells.push_back({sum, idx, flat});
    ++flat;
  } while (detail::next_index(idx, shape));

  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.diag != b.diag) return a.diag < b.diag;
    const bool reversed = (a.diag % 2) == 1;
    return reversed ? a.idx > b.idx : a.idx < b.idx;
  });

  ReshufflePermutation perm;
  perm.shape = std::move(shape);
  perm.forward.resize(total);
  perm.inverse.resize(total);
  for (std::size_t rank = 0; rank < total; ++rank) {
    perm.forward[cells[rank].flat] = order[rank];
    perm.inverse[order[rank]] = cells[rank].flat;
  }
  return perm;
}

std::vector<double> apply(const ReshufflePermutation& perm, std::span<const double> u) {
  if (u.size() != perm.forward.size()) throw std::invalid_argument("length mismatch");
  std::vector<double> out(u.size());
  for (std::size_t dest = 0; dest < u.size(); ++dest) out[dest] = u[perm.forward[dest]];
  return out;
}

std::vector<double> invert(const ReshufflePermutation& perm, std::span<const double> v) {
  if (v.size() != perm.inverse.size()) throw std::invalid_argument("length mismatch");
  std::vector<double> out(v.size());
  for (std::size_t src = 0; src < v.size(); ++src) out[src] = v[perm.inverse[src]];
  return out;
}

}  // namespace hocs
