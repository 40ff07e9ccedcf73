// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace simg {

// Number of worker threads for internal parallelism. Reads the
// SPARSE_IMAGER_THREADS environment variable once; defaults to all cores.
// All parallel reductions accumulate partial results in increasing block
// order, so results are bitwise deterministic for a fixed thread count.
int thread_count();

// Applies thread_count() to Eigen's internal parallelism. Called lazily by
// the operators; safe to call more than once.
void configure_eigen_threads();

}  // namespace simg
