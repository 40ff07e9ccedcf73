// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#include "simg/threads.hpp"

#include <Eigen/Core>
#include <cstdlib>
#include <string>
#include <thread>

namespace simg {

static int read_thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  const char* env = std::getenv("SPARSE_IMAGER_THREADS");
  if (env == nullptr) return hw;
  try {
    int n = std::stoi(env);
    if (n < 1) return 1;
    return n < hw ? n : hw;
  } catch (...) {
    return hw;
  }
}

int thread_count() {
  static const int n = read_thread_count();
  return n;
}

void configure_eigen_threads() {
  static const bool done = [] {
    Eigen::setNbThreads(thread_count());
    return true;
  }();
  (void)done;
}

}  // namespace simg
