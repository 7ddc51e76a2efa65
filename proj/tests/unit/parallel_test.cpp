#include "ramified/parallel.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace ramified {
namespace {

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (std::size_t threads : {1u, 2u, 5u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelFor, RethrowsLowestFailingIndex) {
  for (std::size_t threads : {1u, 4u}) {
    try {
      parallel_for(100, threads, [](std::size_t i) {
        if (i % 10 == 7) throw std::runtime_error(std::to_string(i));
      });
      FAIL();
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "7");
    }
  }
}

TEST(ThreadCount, EnvironmentCap) {
  ::setenv("RT_THREADS", "2", 1);
  EXPECT_EQ(thread_count(8), 2u);
  EXPECT_EQ(thread_count(1), 1u);
  ::setenv("RT_THREADS", "junk", 1);
  EXPECT_EQ(thread_count(8), 8u);
  ::unsetenv("RT_THREADS");
  EXPECT_GE(thread_count(), 1u);
}

}  // namespace
}  // namespace ramified
