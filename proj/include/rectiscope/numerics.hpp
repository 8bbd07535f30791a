#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rectiscope {

/// Correctly rounded floating-point accumulator (Shewchuk partials, as in
/// Python's math.fsum). The result does not depend on the order in which
/// terms are added or on how partial accumulators are merged.
class ExactSum {
 public:
  void add(double x);
  void merge(const ExactSum& other);
  double value() const;

  ExactSum& operator+=(double x) {
    add(x);
    return *this;
  }

 private:
  std::vector<double> partials_;
  double special_ = 0.0;  // inf/nan terms bypass the partials
};

double exact_sum(std::span<const double> values);

/// Philox4x32-10 counter-based generator. A block is a pure function of
/// (key, counter).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Sequential view over one Philox stream, identified by (seed, stream, substream).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t substream = 0);

  std::uint64_t next_u64();
  double uniform();   // [0, 1), 53 random bits
  double normal();    // standard normal via Box-Muller
  std::size_t below(std::size_t bound);  // uniform in [0, bound)

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint32_t substream_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Worker count from RECTISCOPE_THREADS (unset or 0 means hardware concurrency).
unsigned worker_count();

/// Runs body(chunk_begin, chunk_end, chunk_index) over [0, count) split into
/// fixed-size chunks. Chunk boundaries depend only on count and chunk_size,
/// never on the worker count.
void parallel_chunks(std::size_t count, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

inline std::size_t chunk_count(std::size_t count, std::size_t chunk_size) {
  return chunk_size == 0 ? 0 : (count + chunk_size - 1) / chunk_size;
}

/// Runs body(i) for every i in [0, count) on the worker pool.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

std::uint64_t fnv1a64(std::span<const unsigned char> bytes,
                      std::uint64_t state = 0xcbf29ce484222325ULL);

}  // namespace rectiscope
