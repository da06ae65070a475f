#include "hocs/hashing.hpp"

#include <stdexcept>

namespace hocs {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(seed ^ splitmix64(salt + 0x632be59bd9b4e019ull));
}

namespace {

struct SeedStream {
  std::uint64_t state;
  std::uint64_t next() { return splitmix64(state += 0x9e3779b97f4a7c15ull); }

  // Uniform in [lo, p) by rejection on 61-bit draws.
  std::uint64_t next_mod_p(std::uint64_t lo) {
    for (;;) {
      const std::uint64_t v = next() >> 3;
      if (v < kHashPrime && v >= lo) return v;
    }
  }
};

std::uint64_t affine_eval(std::uint64_t a, std::uint64_t b, std::uint64_t i) {
  const unsigned __int128 r = static_cast<unsigned __int128>(a) * i + b;
  return static_cast<std::uint64_t>(r % kHashPrime);
}

}  // namespace

IndexHash IndexHash::affine(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0 || m == 0) throw std::invalid_argument("hash domain and range must be positive");
  SeedStream s{seed};
  IndexHash h;
  h.kind_ = Kind::Affine;
  h.n_ = n;
  h.m_ = m;
  h.a_ = s.next_mod_p(1);
  h.b_ = s.next_mod_p(0);
  return h;
}

IndexHash IndexHash::identity(std::size_t n) {
  if (n == 0) throw std::invalid_argument("hash domain must be positive");
  IndexHash h;
  h.kind_ = Kind::Identity;
  h.n_ = n;
  h.m_ = n;
  return h;
}

IndexHash IndexHash::from_table(std::vector<std::uint32_t> table, std::size_t m) {
  if (table.empty() || m == 0) throw std::invalid_argument("hash domain and range must be positive");
  for (std::uint32_t v : table)
    if (v >= m) throw std::invalid_argument("table value out of range");
  IndexHash h;
  h.kind_ = Kind::Table;
  h.n_ = table.size();
  h.m_ = m;
  h.table_ = std::move(table);
  return h;
}

IndexHash IndexHash::pair(IndexHash fast, IndexHash slow) {
  if (fast.range() != slow.range())
    throw std::invalid_argument("paired hashes must share a range");
  IndexHash h;
  h.kind_ = Kind::Pair;
  h.n_ = fast.domain() * slow.domain();
  h.m_ = fast.range();
  h.fast_ = std::make_shared<IndexHash>(std::move(fast));
  h.slow_ = std::make_shared<IndexHash>(std::move(slow));
  return h;
}

std::uint32_t IndexHash::operator()(std::size_t i) const {
  switch (kind_) {
    case Kind::Affine:
      return static_cast<std::uint32_t>(affine_eval(a_, b_, i) % m_);
    case Kind::Identity:
      return static_cast<std::uint32_t>(i);
    case Kind::Table:
      return table_[i];
    case Kind::Pair: {
      const std::size_t nf = fast_->domain();
      return static_cast<std::uint32_t>(((*fast_)(i % nf) + std::uint64_t{(*slow_)(i / nf)}) % m_);
    }
  }
  return 0;
}

std::size_t IndexHash::pair_fast_domain() const {
  if (kind_ != Kind::Pair) throw std::logic_error("not a pair hash");
  return fast_->domain();
}

SignHash SignHash::affine(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("hash domain must be positive");
  SeedStream s{seed};
  SignHash h;
  h.kind_ = Kind::Affine;
  h.n_ = n;
  h.a_ = s.next_mod_p(1);
  h.b_ = s.next_mod_p(0);
  return h;
}

SignHash SignHash::identity(std::size_t n) {
  if (n == 0) throw std::invalid_argument("hash domain must be positive");
  SignHash h;
  h.kind_ = Kind::Identity;
  h.n_ = n;
  return h;
}

SignHash SignHash::from_table(std::vector<std::int8_t> table) {
  if (table.empty()) throw std::invalid_argument("hash domain must be positive");
  for (std::int8_t v : table)
    if (v != 1 && v != -1) throw std::invalid_argument("sign table values must be +-1");
  SignHash h;
  h.kind_ = Kind::Table;
  h.n_ = table.size();
  h.table_ = std::move(table);
  return h;
}

SignHash SignHash::pair(SignHash fast, SignHash slow) {
  SignHash h;
  h.kind_ = Kind::Pair;
  h.n_ = fast.domain() * slow.domain();
  h.fast_ = std::make_shared<SignHash>(std::move(fast));
  h.slow_ = std::make_shared<SignHash>(std::move(slow));
  return h;
}

int SignHash::operator()(std::size_t i) const {
  switch (kind_) {
    case Kind::Affine:
      return 1 - 2 * static_cast<int>(affine_eval(a_, b_, i) & 1u);
    case Kind::Identity:
      return 1;
    case Kind::Table:
      return table_[i];
    case Kind::Pair: {
      const std::size_t nf = fast_->domain();
      return (*fast_)(i % nf) * (*slow_)(i / nf);
    }
  }
  return 1;
}

IndexHash make_index_hash(std::size_t n, std::size_t m, std::uint64_t seed) {
  return IndexHash::affine(n, m, seed);
}

SignHash make_sign_hash(std::size_t n, std::uint64_t seed) {
  return SignHash::affine(n, seed);
}

DenseTensor hash_matrix(const IndexHash& h) {
  DenseTensor out({h.range(), h.domain()});
  for (std::size_t i = 0; i < h.domain(); ++i) out[h(i) + h.range() * i] = 1.0;
  return out;
}

}  // namespace hocs
