#include "fsim/frontier.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fsim {

Frontier::Frontier(std::size_t num_pages) : position_(num_pages, kAbsent) {
  if (num_pages >= kAbsent) throw std::length_error("frontier capacity exceeds 32-bit page ids");
}

void Frontier::push(PageId page, double priority) {
  const auto i = index_of(page);
  if (i >= position_.size()) throw std::out_of_range("page " + std::to_string(i) + " outside frontier capacity");
  if (position_[i] != kAbsent) throw std::logic_error("page " + std::to_string(i) + " is already in the frontier");
  if (std::isnan(priority)) throw std::invalid_argument("frontier priority must not be NaN");
  heap_.push_back({page, priority, next_seq_++});
  position_[i] = static_cast<std::uint32_t>(heap_.size() - 1);
  sift_up(heap_.size() - 1);
}

void Frontier::update_priority(PageId page, double new_priority) {
  const auto i = index_of(page);
  if (i >= position_.size() || position_[i] == kAbsent) {
    throw std::logic_error("page " + std::to_string(i) + " is not in the frontier");
  }
  if (std::isnan(new_priority)) throw std::invalid_argument("frontier priority must not be NaN");
  const std::size_t slot = position_[i];
  const double old = heap_[slot].priority;
  heap_[slot].priority = new_priority;
  if (new_priority > old) {
    sift_up(slot);
  } else if (new_priority < old) {
    sift_down(slot);
  }
}

FrontierEntry Frontier::pop() {
  if (heap_.empty()) throw std::logic_error("pop from an empty frontier");
  const FrontierEntry out = heap_.front();
  position_[index_of(out.page)] = kAbsent;
  const FrontierEntry last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    place(0, last);
    sift_down(0);
  }
  return out;
}

const FrontierEntry& Frontier::top() const {
  if (heap_.empty()) throw std::logic_error("top of an empty frontier");
  return heap_.front();
}

double Frontier::priority(PageId page) const {
  const auto i = index_of(page);
  if (i >= position_.size() || position_[i] == kAbsent) {
    throw std::logic_error("page " + std::to_string(i) + " is not in the frontier");
  }
  return heap_[position_[i]].priority;
}

void Frontier::place(std::size_t slot, FrontierEntry entry) {
  position_[index_of(entry.page)] = static_cast<std::uint32_t>(slot);
  heap_[slot] = entry;
}

void Frontier::sift_up(std::size_t slot) {
  const FrontierEntry entry = heap_[slot];
  while (slot > 0) {
    const std::size_t parent = (slot - 1) / 2;
    if (!before(entry, heap_[parent])) break;
    place(slot, heap_[parent]);
    slot = parent;
  }
  place(slot, entry);
}

void Frontier::sift_down(std::size_t slot) {
  const FrontierEntry entry = heap_[slot];
  const std::size_t n = heap_.size();
  while (true) {
    std::size_t child = 2 * slot + 1;
    if (child >= n) break;
    if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
    if (!before(heap_[child], entry)) break;
    place(slot, heap_[child]);
    slot = child;
  }
  place(slot, entry);
}

}  // namespace fsim
