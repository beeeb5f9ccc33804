#pragma once

// Deterministic reductions and worker control.
//
// Every sum in the library goes through pairwise_sum(). Terms are grouped
// into leaf blocks of kPairwiseLeaf consecutive indices, each block is
// accumulated left to right, and block sums are combined by recursive
// halving over the block index range. The tree depends on the term count
// alone, so the OpenMP kernel and the serial reference return bit-identical
// results for any number of workers.

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace locklab {

inline constexpr std::size_t kPairwiseLeaf = 128;

// Below this many terms the parallel kernel does not fork.
inline constexpr std::size_t kParallelMinTerms = 1u << 14;

/// Worker count honoured by the parallel kernels. Reads LOCKLAB_THREADS
/// once; falls back to the OpenMP default (machine parallelism).
int worker_count();

/// Overrides the worker count for the rest of the process (tests, CLI).
void set_worker_count(int workers);

namespace detail {

template <class Term>
double leaf_sum(std::size_t begin, std::size_t end, Term& term) {
  double acc = 0.0;
  for (std::size_t i = begin; i < end; ++i) acc += term(i);
  return acc;
}

inline double combine_blocks(const std::vector<double>& blocks, std::size_t lo,
                             std::size_t hi) {
  if (hi - lo == 1) return blocks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return combine_blocks(blocks, lo, mid) + combine_blocks(blocks, mid, hi);
}

template <class Term>
double pairwise_recursive(std::size_t begin, std::size_t end, Term& term) {
  const std::size_t blocks = (end - begin + kPairwiseLeaf - 1) / kPairwiseLeaf;
  if (blocks <= 1) return leaf_sum(begin, end, term);
  const std::size_t mid = begin + (blocks / 2) * kPairwiseLeaf;
  return pairwise_recursive(begin, mid, term) + pairwise_recursive(mid, end, term);
}

}  // namespace detail

/// Serial reference: a direct recursive pairwise sum of term(0..n-1).
template <class Term>
double pairwise_sum_serial(std::size_t n, Term&& term) {
  if (n == 0) return 0.0;
  return detail::pairwise_recursive(0, n, term);
}

/// OpenMP kernel: leaf blocks are evaluated in parallel, then combined
/// serially in the same tree as pairwise_sum_serial(). `term` must be safe
/// to call concurrently.
template <class Term>
double pairwise_sum(std::size_t n, Term&& term) {
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + kPairwiseLeaf - 1) / kPairwiseLeaf;
  std::vector<double> blocks(nblocks);
  const long long count = static_cast<long long>(nblocks);
  const bool fork = n >= kParallelMinTerms && worker_count() > 1;
#pragma omp parallel for schedule(static) num_threads(worker_count()) if (fork)
  for (long long b = 0; b < count; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kPairwiseLeaf;
    const std::size_t end = begin + kPairwiseLeaf < n ? begin + kPairwiseLeaf : n;
    blocks[static_cast<std::size_t>(b)] = detail::leaf_sum(begin, end, term);
  }
  return detail::combine_blocks(blocks, 0, nblocks);
}

}  // namespace locklab
