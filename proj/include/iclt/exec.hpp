#pragma once

namespace iclt {

/// Worker count for OpenMP kernels. Results never depend on it.
struct Exec {
  int threads = 1;
};

}  // namespace iclt
