#pragma once

// Minimal data-parallel loop: indices are handed out atomically, results go
// into caller-owned slots, reductions happen sequentially afterwards so every
// run aggregates in the same order.

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdint>
#include <thread>
#include <vector>

namespace phaselab {

inline int effective_threads(int requested) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (requested <= 0) return (int)hw;
    return requested;
}

template <typename Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn) {
    threads = effective_threads(threads);
    if (threads <= 1 || n <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::int64_t i = next.fetch_add(1);
            if (i >= n) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int spawn = (int)std::min<std::int64_t>(threads, n);
    pool.reserve((std::size_t)spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// Kahan-compensated accumulator for complex sums
struct KahanComplex {
    double re = 0, re_c = 0, im = 0, im_c = 0;

    void add(double r, double i) {
        double y = r - re_c, t = re + y;
        re_c = (t - re) - y;
        re = t;
        y = i - im_c;
        t = im + y;
        im_c = (t - im) - y;
        im = t;
    }
    void add(const std::complex<double>& z) { add(z.real(), z.imag()); }
    std::complex<double> value() const { return {re, im}; }
};

struct KahanReal {
    double s = 0, c = 0;
    void add(double x) {
        double y = x - c, t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

}  // namespace phaselab
