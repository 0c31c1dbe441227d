#include "shapepose/parallel.h"

#include <omp.h>

namespace shapepose {

namespace {
const int kDefaultThreads = omp_get_max_threads();
}  // namespace

void SetThreadCount(int n) { omp_set_num_threads(n > 0 ? n : kDefaultThreads); }

int ThreadCount() { return omp_get_max_threads(); }

}  // namespace shapepose
