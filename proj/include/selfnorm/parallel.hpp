#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace selfnorm {

/// Fixed replication block. Chunk boundaries depend only on the replication
/// count, never on the thread count, so ordered merges are reproducible.
inline constexpr long kChunkReplications = 1L << 15;

struct Chunk {
  std::size_t index;
  long begin;
  long end;
};

inline std::size_t chunk_count(long total) {
  return static_cast<std::size_t>((total + kChunkReplications - 1) / kChunkReplications);
}

/// Runs fn(Chunk) for every chunk of [0, total) on up to `threads` workers.
/// The first exception thrown by any worker is rethrown on the caller.
template <class Fn>
void for_each_chunk(long total, int threads, Fn&& fn) {
  const std::size_t chunks = chunk_count(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      const long begin = static_cast<long>(c) * kChunkReplications;
      try {
        fn(Chunk{c, begin, std::min(total, begin + kChunkReplications)});
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
      }
    }
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(chunks)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

/// Count / mean / centered second moment with Chan et al. pairwise merge.
struct MomentAccumulator {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const MomentAccumulator& other) noexcept {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(other.count);
    const double delta = other.mean - mean;
    const double total = na + nb;
    mean += delta * nb / total;
    m2 += other.m2 + delta * delta * na * nb / total;
    count += other.count;
  }

  double variance() const noexcept {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  }
  double standard_error() const noexcept {
    return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

}  // namespace selfnorm
