#include "symlik/rng.hpp"

#include "symlik/special.hpp"

namespace symlik {

double RngStream::normal() { return norm_quantile(uniform01()); }

}  // namespace symlik
