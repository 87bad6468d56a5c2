#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace qubus {

// Trials are dispatched in fixed-size blocks so that aggregation order is a
// function of the trial count alone. Changing this constant changes rounding
// order in folded sums, so it is part of the reproducibility contract.
constexpr std::uint64_t kTrialBlockSize = 4096;

// Runs body(acc, begin, end) over [0, trials) split into kTrialBlockSize
// blocks, possibly on several threads, then folds the per-block accumulators
// sequentially in block order. With per-trial RNG substreams inside `body`,
// the result is bit-identical for every worker count. threads <= 0 means
// hardware concurrency.
template <typename Acc, typename Body, typename Fold>
Acc parallel_trials(std::uint64_t trials, int threads, const Acc& zero, Body body, Fold fold) {
    Acc total = zero;
    if (trials == 0) return total;

    const std::uint64_t num_blocks = (trials + kTrialBlockSize - 1) / kTrialBlockSize;
    std::uint64_t workers = threads > 0
        ? static_cast<std::uint64_t>(threads)
        : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, num_blocks);

    std::vector<Acc> block_acc(num_blocks, zero);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto work = [&] {
        try {
            for (std::uint64_t b = next.fetch_add(1); b < num_blocks; b = next.fetch_add(1)) {
                if (failed.load(std::memory_order_relaxed)) return;
                const std::uint64_t begin = b * kTrialBlockSize;
                const std::uint64_t end = std::min(trials, begin + kTrialBlockSize);
                body(block_acc[b], begin, end);
            }
        } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::uint64_t i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (auto& acc : block_acc) fold(total, acc);
    return total;
}

}  // namespace qubus
