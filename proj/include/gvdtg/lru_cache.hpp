#pragma once

#include <cstddef>
#include <list>
#include <optional>
#include <unordered_map>
#include <utility>

namespace gvdtg {

/// Bounded map with least-recently-used eviction. Not synchronized.
template <typename Key, typename Value, typename Hash = std::hash<Key>>
class LruCache {
 public:
  explicit LruCache(std::size_t capacity) : capacity_(capacity) {}

  /// Looks up and marks the entry most recently used.
  std::optional<Value> get(const Key& key) {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    entries_.splice(entries_.end(), entries_, it->second);
    return it->second->second;
  }

  bool contains(const Key& key) const { return index_.count(key) != 0; }

  void put(const Key& key, Value value) {
    if (capacity_ == 0) return;
    auto it = index_.find(key);
    if (it != index_.end()) {
      it->second->second = std::move(value);
      entries_.splice(entries_.end(), entries_, it->second);
      return;
    }
    entries_.emplace_back(key, std::move(value));
    index_.emplace(key, std::prev(entries_.end()));
    while (index_.size() > capacity_) {
      index_.erase(entries_.front().first);
      entries_.pop_front();
    }
  }

  template <typename Pred>
  std::size_t erase_if(Pred&& pred) {
    std::size_t erased = 0;
    for (auto it = entries_.begin(); it != entries_.end();) {
      if (pred(it->first, it->second)) {
        index_.erase(it->first);
        it = entries_.erase(it);
        ++erased;
      } else {
        ++it;
      }
    }
    return erased;
  }

  void clear() {
    index_.clear();
    entries_.clear();
  }

  std::size_t size() const { return index_.size(); }
  std::size_t capacity() const { return capacity_; }

  /// Least-recently-used key, if any.
  std::optional<Key> oldest() const {
    if (entries_.empty()) return std::nullopt;
    return entries_.front().first;
  }

 private:
  std::size_t capacity_;
  std::list<std::pair<Key, Value>> entries_;  // front = least recently used
  std::unordered_map<Key, typename std::list<std::pair<Key, Value>>::iterator, Hash> index_;
};

}  // namespace gvdtg
