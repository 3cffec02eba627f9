#pragma once

#include <pthread.h>

#include <cstddef>
#include <exception>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>

namespace eca {

/// Stack reserved for deep ECA recursion. Both engines recurse on the C++
/// stack, so a 10 000-deep ECA call chain needs far more than the default.
inline constexpr std::size_t kEngineStackBytes = std::size_t{1} << 30;

/// Runs `fn` to completion on a fresh thread with a `bytes`-sized stack and
/// returns its result, rethrowing any exception in the caller.
template <class Fn>
auto run_with_stack(std::size_t bytes, Fn&& fn) -> std::invoke_result_t<Fn&> {
  using R = std::invoke_result_t<Fn&>;
  struct Job {
    Fn* fn = nullptr;
    std::conditional_t<std::is_void_v<R>, bool, std::optional<R>> result{};
    std::exception_ptr error;
  } job;
  job.fn = &fn;

  auto trampoline = [](void* arg) -> void* {
    auto* j = static_cast<Job*>(arg);
    try {
      if constexpr (std::is_void_v<R>) {
        (*j->fn)();
        j->result = true;
      } else {
        j->result.emplace((*j->fn)());
      }
    } catch (...) {
      j->error = std::current_exception();
    }
    return nullptr;
  };

  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, bytes);
  pthread_t thread;
  int rc = pthread_create(&thread, &attr, trampoline, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    // No thread available: run inline and accept the default stack.
    if constexpr (std::is_void_v<R>) return fn();
    else return fn();
  }
  pthread_join(thread, nullptr);
  if (job.error) std::rethrow_exception(job.error);
  if constexpr (!std::is_void_v<R>) return std::move(*job.result);
}

}  // namespace eca
