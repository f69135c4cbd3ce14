#pragma once

#include <functional>
#include <span>
#include <vector>

namespace frex {

enum class Exec { Serial, Parallel };

// Evaluate fn at every point of xs.  Grid points are independent, so the
// Parallel policy hands them to OpenMP when the library was built with it;
// each thread writes only its own slot, so the output vector is identical to
// the serial one element for element.  Exceptions thrown by fn are captured
// and rethrown on the calling thread.
std::vector<double> eval_grid(std::span<const double> xs,
                              const std::function<double(double)>& fn, Exec exec);

// Number of threads the Parallel policy would use right now.
int max_threads();

// Cap the Parallel policy's thread count; n <= 0 restores the runtime default.
void set_threads(int n);

}  // namespace frex
