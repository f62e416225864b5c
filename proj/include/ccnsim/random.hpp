#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ccnsim {

/** \brief Deterministic random stream for one simulation run.
 *
 *  All randomness of a run flows through a single stream; equal seeds give
 *  equal draw sequences. Bounded draws avoid std::uniform_int_distribution,
 *  whose mapping differs between standard libraries.
 */
class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed)
    : m_gen(seed)
  {
  }

  std::uint64_t nextU64() { return m_gen(); }

  std::uint32_t nextU32() { return static_cast<std::uint32_t>(m_gen() >> 32); }

  /// Uniform double in [0, 1) with 53 random bits.
  double nextUnit() { return static_cast<double>(m_gen() >> 11) * 0x1.0p-53; }

  /// Uniform index in [0, n); n must be positive.
  std::size_t nextIndex(std::size_t n)
  {
    assert(n > 0);
    using U128 = unsigned __int128;
    return static_cast<std::size_t>((static_cast<U128>(nextU64()) * n) >> 64);
  }

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items)
  {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[nextIndex(i)]);
    }
  }

private:
  std::mt19937_64 m_gen;
};

/// Draws catalog indices from Zipf(exponent) or uniformly over [0, size).
class PopularitySampler {
public:
  static PopularitySampler uniform(std::size_t size)
  {
    PopularitySampler s;
    s.m_size = size;
    return s;
  }

  static PopularitySampler zipf(std::size_t size, double exponent)
  {
    PopularitySampler s;
    s.m_size = size;
    s.m_cdf.reserve(size);
    double total = 0;
    for (std::size_t rank = 1; rank <= size; ++rank) {
      total += 1.0 / std::pow(static_cast<double>(rank), exponent);
      s.m_cdf.push_back(total);
    }
    for (double& v : s.m_cdf) {
      v /= total;
    }
    return s;
  }

  std::size_t size() const { return m_size; }

  std::size_t draw(SeededRng& rng) const
  {
    assert(m_size > 0);
    if (m_cdf.empty()) {
      return rng.nextIndex(m_size);
    }
    double u = rng.nextUnit();
    auto it = std::upper_bound(m_cdf.begin(), m_cdf.end(), u);
    if (it == m_cdf.end()) {
      --it;
    }
    return static_cast<std::size_t>(it - m_cdf.begin());
  }

private:
  std::size_t m_size = 0;
  std::vector<double> m_cdf; // empty for uniform
};

} // namespace ccnsim
