#ifndef SHAPEPOSE_PARALLEL_H_
#define SHAPEPOSE_PARALLEL_H_

namespace shapepose {

// Caps the worker count of all parallel kernels. n <= 0 restores the
// runtime default.
void SetThreadCount(int n);
int ThreadCount();

}  // namespace shapepose

#endif  // SHAPEPOSE_PARALLEL_H_
