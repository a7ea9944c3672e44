#include "kgc/util.hpp"

namespace kgc {

ThreadPool::ThreadPool(unsigned workers) : workers_(workers == 0 ? 1 : workers) {
    for (unsigned i = 1; i < workers_; ++i) {
        threads_.emplace_back([this, i] { worker_loop(i); });
    }
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    start_cv_.notify_all();
    for (auto& t : threads_) t.join();
}

void ThreadPool::run_blocks(
    std::size_t count,
    const std::function<void(unsigned, std::size_t, std::size_t)>& fn) {
    if (count == 0) return;
    if (workers_ == 1) {
        fn(0, 0, count);
        return;
    }
    {
        std::lock_guard lock(mutex_);
        count_ = count;
        fn_ = &fn;
        pending_ = workers_ - 1;
        ++generation_;
    }
    start_cv_.notify_all();
    fn(0, 0, count * 1 / workers_);
    std::unique_lock lock(mutex_);
    done_cv_.wait(lock, [this] { return pending_ == 0; });
    fn_ = nullptr;
}

void ThreadPool::worker_loop(unsigned index) {
    uint64_t seen = 0;
    for (;;) {
        const std::function<void(unsigned, std::size_t, std::size_t)>* fn = nullptr;
        std::size_t count = 0;
        {
            std::unique_lock lock(mutex_);
            start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
            fn = fn_;
            count = count_;
        }
        const std::size_t begin = count * index / workers_;
        const std::size_t end = count * (index + 1) / workers_;
        if (begin < end) (*fn)(index, begin, end);
        {
            std::lock_guard lock(mutex_);
            --pending_;
        }
        done_cv_.notify_one();
    }
}

}  // namespace kgc
