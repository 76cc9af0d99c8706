#pragma once
// Fixed-capacity transition memory with uniform mini-batch sampling.
// A ring buffer: once full, each push evicts the oldest entry. Sampling is
// uniform with replacement and deterministic given the generator state.

#include <cstddef>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "growthlab/csvio.hpp"
#include "growthlab/growth_env.hpp"

namespace growthlab {

class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ConfigError("replay capacity must be > 0");
    storage_.reserve(capacity);
  }

  void push(const Transition& t) {
    if (storage_.size() < capacity_) {
      storage_.push_back(t);
    } else {
      storage_[write_cursor_] = t;
    }
    write_cursor_ = (write_cursor_ + 1) % capacity_;
  }

  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }

  // i-th stored transition in insertion order: 0 is the oldest still present.
  const Transition& oldest_first(std::size_t i) const {
    if (i >= storage_.size()) throw std::out_of_range("replay index out of range");
    if (storage_.size() < capacity_) return storage_[i];
    return storage_[(write_cursor_ + i) % capacity_];
  }

  void sample_into(std::size_t n, std::mt19937_64& rng, std::vector<Transition>& out) const {
    if (storage_.size() < n) {
      throw std::runtime_error("replay buffer underfull: have " +
                               std::to_string(storage_.size()) + ", need " + std::to_string(n));
    }
    out.clear();
    out.reserve(n);
    std::uniform_int_distribution<std::size_t> pick(0, storage_.size() - 1);
    for (std::size_t i = 0; i < n; ++i) out.push_back(storage_[pick(rng)]);
  }

  std::vector<Transition> sample(std::size_t n, std::mt19937_64& rng) const {
    std::vector<Transition> out;
    sample_into(n, rng, out);
    return out;
  }

 private:
  std::size_t capacity_;
  std::size_t write_cursor_ = 0;
  std::vector<Transition> storage_;
};

// Debug dump, oldest first.
inline void dump_replay_csv(const ReplayBuffer& buf, const std::filesystem::path& path) {
  CsvWriter w(path);
  w.row("s", "a", "r", "s_next");
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const Transition& t = buf.oldest_first(i);
    w.row(t.s, t.a, t.r, t.s_next);
  }
}

}  // namespace growthlab
