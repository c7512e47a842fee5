#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "fsim/types.hpp"

namespace fsim {

/// Priority used to enqueue seed pages. Strictly above every finite quality
/// score, so seeds are crawled first, in seed-file order.
inline constexpr double kSeedPriority = std::numeric_limits<double>::infinity();

struct FrontierEntry {
  PageId page;
  double priority;
  std::uint64_t seq;
};

/// Addressable binary max-heap of uncrawled pages keyed by (priority desc,
/// seq asc). Each page has at most one live entry; updates keep the entry's
/// insertion sequence, so equal priorities drain in FIFO order and a frontier
/// with constant priority behaves exactly like a BFS queue.
///
/// Pages are dense ids below the capacity given at construction.
class Frontier {
 public:
  explicit Frontier(std::size_t num_pages);

  /// Throws std::logic_error if `page` is already queued and
  /// std::invalid_argument for a NaN priority.
  void push(PageId page, double priority);

  /// Re-keys a queued page in place, in either direction. Throws
  /// std::logic_error if the page is not queued.
  void update_priority(PageId page, double new_priority);

  /// Removes and returns the maximal entry. Throws std::logic_error when empty.
  FrontierEntry pop();

  const FrontierEntry& top() const;

  bool contains(PageId page) const { return position_[index_of(page)] != kAbsent; }
  /// Current priority of a queued page.
  double priority(PageId page) const;

  std::size_t size() const noexcept { return heap_.size(); }
  bool empty() const noexcept { return heap_.empty(); }
  std::uint64_t pushes() const noexcept { return next_seq_; }

 private:
  static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();

  static bool before(const FrontierEntry& a, const FrontierEntry& b) noexcept {
    if (a.priority != b.priority) return a.priority > b.priority;
    return a.seq < b.seq;
  }

  void place(std::size_t slot, FrontierEntry entry);
  void sift_up(std::size_t slot);
  void sift_down(std::size_t slot);

  std::vector<FrontierEntry> heap_;
  std::vector<std::uint32_t> position_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace fsim
