#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hocs/tensor.hpp"

namespace hocs {

/// Modulus of the affine hash family: the Mersenne prime 2^61 - 1.
inline constexpr std::uint64_t kHashPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t splitmix64(std::uint64_t x);

/// Fixed 64-bit mixing permutation used to derive per-replica / per-mode
/// sub-seeds from one root seed, so a single seed reproduces a whole run.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// Pairwise-independent index map [0,n) -> [0,m): h(i) = ((a*i + b) mod p) mod m
/// with a drawn from [1,p) and b from [0,p). The residual bias of the final
/// `mod m` is accepted (p >> m). Identity and explicit-table variants cover
/// the uncompressed-mode and fixture cases; the pair variant composes two
/// hashes over a product domain t = fast + n_fast*slow as
/// (fast_h(t mod n_fast) + slow_h(t div n_fast)) mod m, which is the hash a
/// flattened outer product inherits from its factors.
class IndexHash {
 public:
  enum class Kind { Affine, Identity, Table, Pair };

  static IndexHash affine(std::size_t n, std::size_t m, std::uint64_t seed);
  static IndexHash identity(std::size_t n);
  static IndexHash from_table(std::vector<std::uint32_t> table, std::size_t m);
  static IndexHash pair(IndexHash fast, IndexHash slow);

  std::uint32_t operator()(std::size_t i) const;

  Kind kind() const noexcept { return kind_; }
  std::size_t domain() const noexcept { return n_; }
  std::size_t range() const noexcept { return m_; }
  /// Domain of the fast component (Pair kind only).
  std::size_t pair_fast_domain() const;

 private:
  IndexHash() = default;
  Kind kind_ = Kind::Identity;
  std::size_t n_ = 0, m_ = 0;
  std::uint64_t a_ = 0, b_ = 0;
  std::vector<std::uint32_t> table_;
  std::shared_ptr<const IndexHash> fast_, slow_;
};

/// Sign map [0,n) -> {-1,+1}: s(i) = 1 - 2*(((a*i + b) mod p) mod 2).
/// The Identity kind is the all-plus map used on uncompressed modes.
class SignHash {
 public:
  enum class Kind { Affine, Identity, Table, Pair };

  static SignHash affine(std::size_t n, std::uint64_t seed);
  static SignHash identity(std::size_t n);  // all +1
  static SignHash from_table(std::vector<std::int8_t> table);
  static SignHash pair(SignHash fast, SignHash slow);

  int operator()(std::size_t i) const;

  Kind kind() const noexcept { return kind_; }
  std::size_t domain() const noexcept { return n_; }

 private:
  SignHash() = default;
  Kind kind_ = Kind::Identity;
  std::size_t n_ = 0;
  std::uint64_t a_ = 0, b_ = 0;
  std::vector<std::int8_t> table_;
  std::shared_ptr<const SignHash> fast_, slow_;
};

IndexHash make_index_hash(std::size_t n, std::size_t m, std::uint64_t seed);
SignHash make_sign_hash(std::size_t n, std::uint64_t seed);

/// 0/1 matrix of shape range x domain with exactly one 1 per column, at row
/// h(i). Only used to cross-check the mode-product formulation of sketching.
DenseTensor hash_matrix(const IndexHash& h);

}  // namespace hocs
