#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace gsing {

template <class T, class Fn>
T s6_sum(Fn term, T zero) {
    const auto& perms = permutations6();
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
    const std::size_t chunk = (perms.size() + workers - 1) / workers;
    std::vector<T> partial(workers, zero);
    auto run = [&](std::size_t w) {
        const std::size_t lo = w * chunk, hi = std::min(perms.size(), lo + chunk);
        for (std::size_t k = lo; k < hi; ++k) partial[w] += term(perms[k]);
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    T total = zero;
    for (auto& p : partial) total += p;
    return total;
}

}  // namespace gsing
