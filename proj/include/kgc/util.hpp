#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace kgc {

// splitmix64 finalizer; used to derive independent RNG streams from
// (seed, index) pairs so parallel and serial runs agree.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_rng(uint64_t seed, uint64_t stream) {
    return std::mt19937_64(mix64(seed ^ mix64(stream)));
}

// Uniform in [0, 1); bit-stable across standard library versions.
inline double rand_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in [-half, half).
inline float rand_symmetric(std::mt19937_64& rng, double half) {
    return static_cast<float>((rand_unit(rng) - 0.5) * 2.0 * half);
}

// Persistent pool running contiguous index blocks. With one worker the body
// runs inline on the calling thread, which keeps the single-threaded path
// free of any synchronization (the determinism guarantee lives there).
class ThreadPool {
public:
    explicit ThreadPool(unsigned workers);
    ~ThreadPool();
    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    unsigned size() const { return workers_; }

    // fn(worker, begin, end) over a static partition of [0, count).
    void run_blocks(std::size_t count,
                    const std::function<void(unsigned, std::size_t, std::size_t)>& fn);

private:
    void worker_loop(unsigned index);

    unsigned workers_;
    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    uint64_t generation_ = 0;
    unsigned pending_ = 0;
    bool stop_ = false;
    std::size_t count_ = 0;
    const std::function<void(unsigned, std::size_t, std::size_t)>* fn_ = nullptr;
};

}  // namespace kgc
