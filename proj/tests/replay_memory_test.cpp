// Replay buffer tests: FIFO eviction, underfull errors, sampling uniformity
// (chi-square), and seed determinism.

#include "growthlab/replay_memory.hpp"

#include <gtest/gtest.h>

#include <set>

namespace growthlab {
namespace {

Transition make_t(double tag) { return Transition{tag, 0.5, 0.0, tag + 1.0}; }

TEST(ReplayBuffer, PushIncreasesCountUpToCapacity) {
  ReplayBuffer buf(4);
  EXPECT_EQ(buf.size(), 0u);
  buf.push(make_t(1));
  EXPECT_EQ(buf.size(), 1u);
  for (int i = 0; i < 10; ++i) buf.push(make_t(i));
  EXPECT_EQ(buf.size(), 4u);
}

TEST(ReplayBuffer, FifoEviction) {
  ReplayBuffer buf(2);
  buf.push(make_t(1));
  buf.push(make_t(2));
  buf.push(make_t(3));
  EXPECT_EQ(buf.size(), 2u);
  EXPECT_DOUBLE_EQ(buf.oldest_first(0).s, 2.0);
  EXPECT_DOUBLE_EQ(buf.oldest_first(1).s, 3.0);
}

TEST(ReplayBuffer, CountStableThroughSecondPass) {
  const std::size_t cap = 8;
  ReplayBuffer buf(cap);
  for (std::size_t i = 0; i < cap; ++i) buf.push(make_t(static_cast<double>(i)));
  for (std::size_t i = 0; i < cap; ++i) {
    buf.push(make_t(static_cast<double>(100 + i)));
    ASSERT_EQ(buf.size(), cap);
  }
  // After the second pass only the new items remain, in order.
  for (std::size_t i = 0; i < cap; ++i) {
    ASSERT_DOUBLE_EQ(buf.oldest_first(i).s, static_cast<double>(100 + i));
  }
}

TEST(ReplayBuffer, SampleSingleStoredItem) {
  ReplayBuffer buf(4);
  buf.push(make_t(42));
  std::mt19937_64 rng(1);
  auto batch = buf.sample(1, rng);
  ASSERT_EQ(batch.size(), 1u);
  EXPECT_DOUBLE_EQ(batch[0].s, 42.0);
}

TEST(ReplayBuffer, UnderfullSamplingThrows) {
  ReplayBuffer buf(16);
  buf.push(make_t(1));
  buf.push(make_t(2));
  std::mt19937_64 rng(1);
  EXPECT_THROW(buf.sample(3, rng), std::runtime_error);
}

TEST(ReplayBuffer, NeverFabricatesTransitions) {
  ReplayBuffer buf(32);
  std::set<double> tags;
  for (int i = 0; i < 32; ++i) {
    buf.push(make_t(static_cast<double>(i)));
    tags.insert(static_cast<double>(i));
  }
  std::mt19937_64 rng(9);
  for (const auto& t : buf.sample(32, rng)) {
    ASSERT_TRUE(tags.count(t.s)) << "sampled a transition that was never stored";
  }
}

TEST(ReplayBuffer, DeterministicGivenSeed) {
  ReplayBuffer buf(64);
  for (int i = 0; i < 64; ++i) buf.push(make_t(static_cast<double>(i)));
  std::mt19937_64 r1(777), r2(777);
  auto a = buf.sample(32, r1);
  auto b = buf.sample(32, r2);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_DOUBLE_EQ(a[i].s, b[i].s);
}

TEST(ReplayBuffer, SamplingIsUniformChiSquare) {
  // 10^5 draws over 100 items here (the acceptance suite runs the full 10^6).
  // Chi-square with 99 degrees of freedom: reject above the p=0.001 critical
  // value 148.23035916510173.
  const int items = 100;
  ReplayBuffer buf(items);
  for (int i = 0; i < items; ++i) buf.push(make_t(static_cast<double>(i)));
  std::mt19937_64 rng(123456);
  const long draws = 100000;
  std::vector<long> counts(items, 0);
  std::vector<Transition> batch;
  for (long i = 0; i < draws; i += 50) {
    buf.sample_into(50, rng, batch);
    for (const auto& t : batch) counts[static_cast<int>(t.s)]++;
  }
  const double expected = static_cast<double>(draws) / items;
  double chi2 = 0.0;
  for (long c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  EXPECT_LT(chi2, 148.23035916510173);
}

TEST(ReplayBuffer, ZeroCapacityRejected) {
  EXPECT_THROW(ReplayBuffer(0), ConfigError);
}

}  // namespace
}  // namespace growthlab
