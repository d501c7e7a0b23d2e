#ifndef SPLITMC_VALUATION_SET_HPP
#define SPLITMC_VALUATION_SET_HPP

#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

namespace splitmc {

// Append-only set of fixed-width byte tuples (variable valuations), the
// workhorse container behind state sets and invariant components. Tuples are
// stored contiguously; the hash index is open-addressing over slots.
// Iteration order is insertion order, which is deterministic for every
// deterministic producer.
class ValuationSet {
public:
  explicit ValuationSet(uint32_t width) : width_(width) {}

  uint32_t width() const { return width_; }
  size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  std::span<const uint8_t> at(uint32_t index) const {
    return {data_.data() + static_cast<size_t>(index) * width_, width_};
  }

  // Returns (index, true) when the tuple was new, (existing index, false)
  // otherwise. vals.size() must equal width().
  std::pair<uint32_t, bool> insert(std::span<const uint8_t> vals);

  bool contains(std::span<const uint8_t> vals) const {
    return find(vals) != kNotFound;
  }
  static constexpr uint32_t kNotFound = UINT32_MAX;
  uint32_t find(std::span<const uint8_t> vals) const;

  // Indices in lexicographic tuple order; canonical for output and equality.
  std::vector<uint32_t> sorted_indices() const;

  bool includes(const ValuationSet& other) const;  // superset test
  friend bool set_equal(const ValuationSet& a, const ValuationSet& b) {
    return a.count_ == b.count_ && a.includes(b);
  }

private:
  uint64_t hash_of(const uint8_t* p) const;
  void grow_table();

  uint32_t width_;
  size_t count_ = 0;
  std::vector<uint8_t> data_;
  std::vector<uint32_t> table_;  // slot -> tuple index + 1, 0 = empty
  size_t mask_ = 0;
};

}  // namespace splitmc

#endif
