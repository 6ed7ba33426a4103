#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

#include "sla/parallel.hpp"

namespace sla {
namespace {

class ThreadCount : public ::testing::Test {
protected:
  void SetUp() override { saved_ = thread_count(); }
  void TearDown() override { set_thread_count(saved_); }
  unsigned saved_ = 1;
};

TEST_F(ThreadCount, ZeroMeansHardware) {
  set_thread_count(0);
  EXPECT_EQ(thread_count(), std::max(1u, std::thread::hardware_concurrency()));
  set_thread_count(3);
  EXPECT_EQ(thread_count(), 3u);
}

TEST_F(ThreadCount, ReadsEnvironment) {
  ::setenv("SLA_THREADS", "2", 1);
  configure_threads_from_env();
  EXPECT_EQ(thread_count(), 2u);
  ::setenv("SLA_THREADS", "not-a-number", 1);
  configure_threads_from_env();
  EXPECT_EQ(thread_count(), 2u);
  ::unsetenv("SLA_THREADS");
}

TEST_F(ThreadCount, ParallelForVisitsEveryIndexOnce) {
  for (unsigned threads : {1u, 2u, 4u, 7u}) {
    set_thread_count(threads);
    for (std::size_t n : {0u, 1u, 255u, 10000u}) {
      std::vector<int> hits(n, 0);
      parallel_for(n, [&](std::size_t i) { ++hits[i]; });
      EXPECT_EQ(std::accumulate(hits.begin(), hits.end(), 0), static_cast<int>(n));
      for (int h : hits) EXPECT_EQ(h, 1);
    }
  }
}

TEST_F(ThreadCount, ExceptionsPropagate) {
  set_thread_count(4);
  EXPECT_THROW(parallel_for(5000,
                            [](std::size_t i) {
                              if (i == 4321) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

}  // namespace
}  // namespace sla
