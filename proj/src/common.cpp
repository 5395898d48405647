#include "netmech/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "netmech/rng.hpp"

namespace netmech {

std::string_view to_string(Layer layer) {
  switch (layer) {
    case Layer::L: return "L";
    case Layer::A: return "A";
    case Layer::Y: return "Y";
  }
  return "?";
}

std::string_view to_string(Mechanism m) {
  switch (m) {
    case Mechanism::Undirected: return "undirected";
    case Mechanism::Bidirected: return "bidirected";
    case Mechanism::Unknown: return "unknown";
  }
  return "?";
}

char mechanism_code(Mechanism m) {
  switch (m) {
    case Mechanism::Undirected: return 'U';
    case Mechanism::Bidirected: return 'B';
    case Mechanism::Unknown: return '?';
  }
  return '?';
}

std::optional<Mechanism> mechanism_from_code(char c) {
  switch (c) {
    case 'U': case 'u': return Mechanism::Undirected;
    case 'B': case 'b': return Mechanism::Bidirected;
    case '?': return Mechanism::Unknown;
    default: return std::nullopt;
  }
}

std::size_t worker_count() {
  if (const char* env = std::getenv("NETMECH_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace netmech
