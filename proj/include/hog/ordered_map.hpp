#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hog {

/// Insertion-ordered map with string keys. Lookups are linear; the maps this
/// project handles hold a few dozen entries at most.
template <typename Value>
class OrderedMap {
 public:
  using value_type = std::pair<std::string, Value>;
  using const_iterator = typename std::vector<value_type>::const_iterator;

  /// Returns false (and leaves the map untouched) if the key already exists.
  bool insert(std::string key, Value value) {
    if (contains(key)) return false;
    items_.emplace_back(std::move(key), std::move(value));
    return true;
  }

  void insert_or_assign(std::string key, Value value) {
    if (auto* v = find(key)) {
      *v = std::move(value);
    } else {
      items_.emplace_back(std::move(key), std::move(value));
    }
  }

  const Value* find(std::string_view key) const {
    auto it = std::find_if(items_.begin(), items_.end(),
                           [&](const value_type& kv) { return kv.first == key; });
    return it == items_.end() ? nullptr : &it->second;
  }

  Value* find(std::string_view key) {
    auto it = std::find_if(items_.begin(), items_.end(),
                           [&](const value_type& kv) { return kv.first == key; });
    return it == items_.end() ? nullptr : &it->second;
  }

  bool contains(std::string_view key) const { return find(key) != nullptr; }
  bool erase(std::string_view key) {
    auto it = std::find_if(items_.begin(), items_.end(),
                           [&](const value_type& kv) { return kv.first == key; });
    if (it == items_.end()) return false;
    items_.erase(it);
    return true;
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }

  friend bool operator==(const OrderedMap&, const OrderedMap&) = default;

 private:
  std::vector<value_type> items_;
};

}  // namespace hog
