/*
 * Static predecessor structure over a sorted integer key set, with one
 * payload per key.  Queries are plain binary searches: at the scale this
 * library targets, a cache-friendly sorted array beats fancier predecessor
 * structures and keeps the code auditable.
 *
 * pred(x)        = largest key <= x (with payload), or absent.
 * pred_strict(x) = largest key <  x (with payload), or absent.
 *
 * Every query bumps an atomic counter so tests can assert exact operation
 * counts; the structure itself is immutable after construction.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cstdint>
#include <optional>
#include <utility>

#include "rik/common.hpp"

namespace rik {

template <typename Payload>
class PredSet {
  public:
    struct Hit {
        pos_t key;
        Payload payload;
    };

    PredSet() = default;

    // Keys must be strictly increasing; payloads[i] belongs to keys[i].
    PredSet(std::vector<pos_t> keys, std::vector<Payload> payloads,
            pos_t universe_hint = 0)
        : keys_(std::move(keys)),
          payloads_(std::move(payloads)),
          universe_hint_(universe_hint) {
        assert(keys_.size() == payloads_.size());
        assert(std::is_sorted(keys_.begin(), keys_.end()) &&
               std::adjacent_find(keys_.begin(), keys_.end()) == keys_.end());
    }

    // The atomic counter blocks the defaulted special members; copies and
    // moves carry the counter value over.
    PredSet(const PredSet& o)
        : keys_(o.keys_),
          payloads_(o.payloads_),
          universe_hint_(o.universe_hint_),
          queries_(o.query_count()) {}
    PredSet(PredSet&& o) noexcept
        : keys_(std::move(o.keys_)),
          payloads_(std::move(o.payloads_)),
          universe_hint_(o.universe_hint_),
          queries_(o.query_count()) {}
    PredSet& operator=(const PredSet& o) {
        if (this != &o) {
            keys_ = o.keys_;
            payloads_ = o.payloads_;
            universe_hint_ = o.universe_hint_;
            queries_.store(o.query_count(), std::memory_order_relaxed);
        }
        return *this;
    }
    PredSet& operator=(PredSet&& o) noexcept {
        keys_ = std::move(o.keys_);
        payloads_ = std::move(o.payloads_);
        universe_hint_ = o.universe_hint_;
        queries_.store(o.query_count(), std::memory_order_relaxed);
        return *this;
    }

    std::optional<Hit> pred(pos_t x) const {
        ++queries_;
        auto it = std::upper_bound(keys_.begin(), keys_.end(), x);
        if (it == keys_.begin()) return std::nullopt;
        auto i = static_cast<std::size_t>(it - keys_.begin()) - 1;
        return Hit{keys_[i], payloads_[i]};
    }

    std::optional<Hit> pred_strict(pos_t x) const {
        ++queries_;
        auto it = std::lower_bound(keys_.begin(), keys_.end(), x);
        if (it == keys_.begin()) return std::nullopt;
        auto i = static_cast<std::size_t>(it - keys_.begin()) - 1;
        return Hit{keys_[i], payloads_[i]};
    }

    bool contains(pos_t x) const {
        return std::binary_search(keys_.begin(), keys_.end(), x);
    }

    std::size_t size() const { return keys_.size(); }
    bool empty() const { return keys_.empty(); }
    pos_t universe_hint() const { return universe_hint_; }
    const std::vector<pos_t>& keys() const { return keys_; }
    const std::vector<Payload>& payloads() const { return payloads_; }

    std::uint64_t query_count() const {
        return queries_.load(std::memory_order_relaxed);
    }
    void reset_query_count() const {
        queries_.store(0, std::memory_order_relaxed);
    }

  private:
    std::vector<pos_t> keys_;
    std::vector<Payload> payloads_;
    pos_t universe_hint_ = 0;
    mutable std::atomic<std::uint64_t> queries_{0};
};

}  // namespace rik
