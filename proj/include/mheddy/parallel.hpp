// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MHEDDY_PARALLEL_HPP
#define MHEDDY_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mheddy
{

// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be written by
// index so the outcome does not depend on scheduling. The first exception is rethrown.
template <typename Fn>
void parallel_for(int count, int threads, Fn &&fn)
{
  threads = std::max(1, std::min(threads, count));
  if (threads == 1)
  {
    for (int i = 0; i < count; i++)
    {
      fn(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; w++)
  {
    pool.emplace_back(
        [&]
        {
          for (int i = next++; i < count; i = next++)
          {
            try
            {
              fn(i);
            }
            catch (...)
            {
              std::lock_guard<std::mutex> lock(error_mutex);
              if (!error)
              {
                error = std::current_exception();
              }
            }
          }
        });
  }
  for (auto &t : pool)
  {
    t.join();
  }
  if (error)
  {
    std::rethrow_exception(error);
  }
}

}  // namespace mheddy

#endif  // MHEDDY_PARALLEL_HPP
