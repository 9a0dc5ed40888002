#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "mmd2d/random.hpp"

namespace mmd2d {

struct ContentItem {
  int id = 0;
  int segment_count = 100;            // M_p
  std::uint64_t segment_bits = 0;     // bits per segment
};

struct ContentCatalog {
  std::vector<ContentItem> contents;

  const ContentItem& at(int id) const;
  /// N_c items of `segments` segments each, every item `total_bits` long
  /// (rounded down to whole bits per segment).
  static ContentCatalog uniform(int count, int segments, std::uint64_t total_bits);
};

/// Sorted set of 1-based segment indices of one content.
class SegmentSet {
 public:
  SegmentSet() = default;
  SegmentSet(int content, std::vector<int> segments);
  static SegmentSet full(const ContentItem& item);

  int content() const { return content_; }
  const std::vector<int>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  bool contains(int segment) const;
  SegmentSet intersect(const SegmentSet& other) const;
  /// Removes every index in `delivered`; returns how many were present.
  std::size_t remove(const SegmentSet& delivered);
  /// First `count` indices.
  SegmentSet prefix(std::size_t count) const;

 private:
  int content_ = -1;
  std::vector<int> segments_;
};

struct Cache {
  std::vector<SegmentSet> items;
  const SegmentSet* find(int content) const;
};

/// Caches keyed by transmitter node id.
using CacheState = std::map<int, Cache>;

struct RequestState {
  int node = -1;
  SegmentSet request;
  int original_segments = 0;
  int failure_counter = 0;  // t_n
  int max_trials = 3;       // f
  bool switched_to_cellular = false;
};

/// |C n R|; zero when the contents differ.
std::size_t availability(const SegmentSet& cache, const SegmentSet& request);
std::size_t availability(const Cache& cache, const SegmentSet& request);

/// Segments of `request` that `cache` can deliver, first `count` of them in
/// index order.
SegmentSet deliverable(const Cache& cache, const SegmentSet& request, std::size_t count);

/// Each transmitter caches each catalog item with probability `cache_probability`.
/// With `partial_fraction` < 1, each segment of a cached item is kept with that
/// probability instead of caching the whole item.
CacheState populate_caches(std::span<const int> transmitter_ids, const ContentCatalog& catalog,
                           double cache_probability, double partial_fraction, Rng& rng);

/// Removes the first `delivered` requested segments and resets t_n.
RequestState update_request(RequestState request, std::size_t delivered);
/// Removes exactly the delivered segments and resets t_n.
RequestState update_request(RequestState request, const SegmentSet& delivered);

}  // namespace mmd2d
