#pragma once

#include <cstddef>
#include <span>

namespace hydrofel {

// Fixed-order pairwise (tree) summation. The association order depends only
// on the length of the input, so the result is reproducible bit for bit
// regardless of how the input was produced. Error grows as O(log n) rather
// than O(n) for naive accumulation.
template <class T>
T pairwise_sum(std::span<const T> x) {
  constexpr std::size_t leaf = 8;
  if (x.size() <= leaf) {
    T s{};
    for (const T& v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

template <class T>
T pairwise_mean(std::span<const T> x) {
  return x.empty() ? T{} : pairwise_sum(x) / static_cast<T>(x.size());
}

}  // namespace hydrofel
