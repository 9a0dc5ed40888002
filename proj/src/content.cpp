#include "mmd2d/content.hpp"

#include <algorithm>
#include <iterator>

#include "mmd2d/units.hpp"

namespace mmd2d {

const ContentItem& ContentCatalog::at(int id) const {
  for (const auto& c : contents)
    if (c.id == id) return c;
  throw ParameterError("unknown content id " + std::to_string(id));
}

ContentCatalog ContentCatalog::uniform(int count, int segments, std::uint64_t total_bits) {
  if (segments < 1) throw ParameterError("a content needs at least one segment");
  ContentCatalog cat;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seg_bits = std::max<std::uint64_t>(1, total_bits / segments);
    cat.contents.push_back({i, segments, seg_bits});
  }
  return cat;
}

SegmentSet::SegmentSet(int content, std::vector<int> segments)
    : content_(content), segments_(std::move(segments)) {
  std::sort(segments_.begin(), segments_.end());
  segments_.erase(std::unique(segments_.begin(), segments_.end()), segments_.end());
}

SegmentSet SegmentSet::full(const ContentItem& item) {
  std::vector<int> s(item.segment_count);
  for (int i = 0; i < item.segment_count; ++i) s[i] = i + 1;
  return SegmentSet(item.id, std::move(s));
}

bool SegmentSet::contains(int segment) const {
  return std::binary_search(segments_.begin(), segments_.end(), segment);
}

SegmentSet SegmentSet::intersect(const SegmentSet& other) const {
  SegmentSet out;
  out.content_ = content_;
  if (other.content_ != content_) return out;
  std::set_intersection(segments_.begin(), segments_.end(), other.segments_.begin(),
                        other.segments_.end(), std::back_inserter(out.segments_));
  return out;
}

std::size_t SegmentSet::remove(const SegmentSet& delivered) {
  if (delivered.content_ != content_) return 0;
  std::vector<int> rest;
  std::set_difference(segments_.begin(), segments_.end(), delivered.segments_.begin(),
                      delivered.segments_.end(), std::back_inserter(rest));
  const std::size_t removed = segments_.size() - rest.size();
  segments_ = std::move(rest);
  return removed;
}

SegmentSet SegmentSet::prefix(std::size_t count) const {
  SegmentSet out;
  out.content_ = content_;
  count = std::min(count, segments_.size());
  out.segments_.assign(segments_.begin(), segments_.begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

const SegmentSet* Cache::find(int content) const {
  for (const auto& s : items)
    if (s.content() == content) return &s;
  return nullptr;
}

std::size_t availability(const SegmentSet& cache, const SegmentSet& request) {
  if (cache.content() != request.content()) return 0;
  return cache.intersect(request).size();
}

std::size_t availability(const Cache& cache, const SegmentSet& request) {
  const SegmentSet* item = cache.find(request.content());
  return item ? availability(*item, request) : 0;
}

SegmentSet deliverable(const Cache& cache, const SegmentSet& request, std::size_t count) {
  const SegmentSet* item = cache.find(request.content());
  if (!item) return SegmentSet(request.content(), {});
  return item->intersect(request).prefix(count);
}

CacheState populate_caches(std::span<const int> transmitter_ids, const ContentCatalog& catalog,
                           double cache_probability, double partial_fraction, Rng& rng) {
  if (!(cache_probability >= 0.0 && cache_probability <= 1.0))
    throw ParameterError("cache probability must lie in [0, 1]");
  if (!(partial_fraction > 0.0 && partial_fraction <= 1.0))
    throw ParameterError("partial cache fraction must lie in (0, 1]");
  CacheState state;
  for (int id : transmitter_ids) {
    Cache cache;
    for (const auto& item : catalog.contents) {
      if (!(uniform01(rng) < cache_probability)) continue;
      if (partial_fraction >= 1.0) {
        cache.items.push_back(SegmentSet::full(item));
        continue;
      }
      std::vector<int> kept;
      for (int s = 1; s <= item.segment_count; ++s)
        if (uniform01(rng) < partial_fraction) kept.push_back(s);
      if (!kept.empty()) cache.items.emplace_back(item.id, std::move(kept));
    }
    state.emplace(id, std::move(cache));
  }
  return state;
}

RequestState update_request(RequestState request, std::size_t delivered) {
  request.request.remove(request.request.prefix(delivered));
  request.failure_counter = 0;
  return request;
}

RequestState update_request(RequestState request, const SegmentSet& delivered) {
  request.request.remove(delivered);
  request.failure_counter = 0;
  return request;
}

}  // namespace mmd2d
