#include "streamseal/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace streamseal {

bool parallel_available() {
#ifdef _OPENMP
  return omp_get_max_threads() > 1;
#else
  return false;
#endif
}

}  // namespace streamseal
