#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace illumkit {

/// Worker count: ILLUMKIT_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Calls body(begin, end) over contiguous chunks of [0, n). Chunks run
/// concurrently; callers must only write to disjoint state or use atomics.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Neumaier-compensated sum, evaluated sequentially so the result is
/// independent of thread count.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_sum(std::span<const double> values);

} // namespace illumkit
