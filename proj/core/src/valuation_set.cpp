#include "splitmc/valuation_set.hpp"

#include <algorithm>
#include <cassert>

namespace splitmc {

namespace {
// FNV-1a over the tuple bytes; cheap and good enough for byte tuples
inline uint64_t fnv1a(const uint8_t* p, size_t n) {
  uint64_t h = 1469598103934665603ull;
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}
}  // namespace

uint64_t ValuationSet::hash_of(const uint8_t* p) const {
  return fnv1a(p, width_);
}

void ValuationSet::grow_table() {
  size_t cap = table_.empty() ? 64 : table_.size() * 2;
  table_.assign(cap, 0);
  mask_ = cap - 1;
  for (uint32_t idx = 0; idx < count_; ++idx) {
    const uint8_t* p = data_.data() + static_cast<size_t>(idx) * width_;
    size_t slot = hash_of(p) & mask_;
    while (table_[slot] != 0) slot = (slot + 1) & mask_;
    table_[slot] = idx + 1;
  }
}

std::pair<uint32_t, bool> ValuationSet::insert(std::span<const uint8_t> vals) {
  assert(vals.size() == width_);
  if (count_ * 10 >= table_.size() * 7) grow_table();
  size_t slot = fnv1a(vals.data(), width_) & mask_;
  while (table_[slot] != 0) {
    uint32_t idx = table_[slot] - 1;
    const uint8_t* p = data_.data() + static_cast<size_t>(idx) * width_;
    if (width_ == 0 || std::memcmp(p, vals.data(), width_) == 0) return {idx, false};
    slot = (slot + 1) & mask_;
  }
  uint32_t idx = static_cast<uint32_t>(count_);
  data_.insert(data_.end(), vals.begin(), vals.end());
  table_[slot] = idx + 1;
  ++count_;
  return {idx, true};
}

uint32_t ValuationSet::find(std::span<const uint8_t> vals) const {
  if (table_.empty()) return kNotFound;
  size_t slot = fnv1a(vals.data(), width_) & mask_;
  while (table_[slot] != 0) {
    uint32_t idx = table_[slot] - 1;
    const uint8_t* p = data_.data() + static_cast<size_t>(idx) * width_;
    if (width_ == 0 || std::memcmp(p, vals.data(), width_) == 0) return idx;
    slot = (slot + 1) & mask_;
  }
  return kNotFound;
}

std::vector<uint32_t> ValuationSet::sorted_indices() const {
  std::vector<uint32_t> idx(count_);
  for (uint32_t i = 0; i < count_; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](uint32_t a, uint32_t b) {
    const uint8_t* pa = data_.data() + static_cast<size_t>(a) * width_;
    const uint8_t* pb = data_.data() + static_cast<size_t>(b) * width_;
    return std::lexicographical_compare(pa, pa + width_, pb, pb + width_);
  });
  return idx;
}

bool ValuationSet::includes(const ValuationSet& other) const {
  if (other.width_ != width_) return false;
  for (uint32_t i = 0; i < other.count_; ++i)
    if (!contains(other.at(i))) return false;
  return true;
}

}  // namespace splitmc
