#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

namespace lacunary {

/// Worker pool front. Work is split into index-addressed tasks; every task
/// writes only to its own slot, and reductions happen afterwards in index
/// order, so results are independent of the worker count.
class Executor {
public:
  /// `workers == 0` means one worker per hardware thread.
  explicit Executor(std::size_t workers = 1);

  std::size_t workers() const noexcept { return workers_; }

  /// Runs `body(i)` for every i in [0, count). If tasks throw, the exception
  /// of the lowest failing index is rethrown after all workers finish.
  void for_each_index(std::size_t count,
                      const std::function<void(std::size_t)>& body) const;

private:
  std::size_t workers_;
};

/// Default chunk length for replication loops. Chunk boundaries depend only
/// on this constant, never on the worker count.
inline constexpr std::size_t kReplicationChunk = 1024;

/// Splits [0, total) into fixed chunks, evaluates `fn(begin, end)` for each
/// chunk in parallel and returns the per-chunk results in chunk order.
template <class Fn>
auto map_chunks(const Executor& exec, std::size_t total, std::size_t chunk, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}, std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}, std::size_t{}));
  const std::size_t chunks = chunk == 0 ? 0 : (total + chunk - 1) / chunk;
  std::vector<Result> out(chunks);
  exec.for_each_index(chunks, [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(total, begin + chunk);
    out[c] = fn(begin, end);
  });
  return out;
}

}  // namespace lacunary
