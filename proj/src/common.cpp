#include "tfwave/common.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

namespace tfwave {

std::uint64_t mix_u64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t hash_key(std::uint64_t seed, std::int64_t a, std::int64_t b, std::uint64_t salt) {
    std::uint64_t h = mix_u64(seed);
    h = mix_u64(h ^ static_cast<std::uint64_t>(a) * 0x9e3779b97f4a7c15ull);
    h = mix_u64(h ^ static_cast<std::uint64_t>(b) * 0xc2b2ae3d27d4eb4full);
    h = mix_u64(h ^ salt);
    return h;
}

double u01_from_key(std::uint64_t key) {
    return static_cast<double>(mix_u64(key) >> 11) * 0x1.0p-53;
}

std::uint64_t DetRng::next_u64() {
    state_ = mix_u64(state_);
    return state_;
}

double DetRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double DetRng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double DetRng::normal() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    cached_ = r * std::sin(th);
    have_cached_ = true;
    return r * std::cos(th);
}

cplx DetRng::unit_phase() {
    const double th = 2.0 * M_PI * uniform();
    return {std::cos(th), std::sin(th)};
}

namespace {

std::atomic<int> g_thread_override{0};

int env_thread_count() {
    const char* env = std::getenv("TFWAVE_THREADS");
    if (env) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

} // namespace

void set_thread_count(int n) { g_thread_override.store(n); }

int thread_count() {
    const int ov = g_thread_override.load();
    return ov >= 1 ? ov : env_thread_count();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const int nt = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    const std::size_t kChunk =
        std::max<std::size_t>(1, n / (static_cast<std::size_t>(nt) * 8));
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t lo = next.fetch_add(kChunk);
                if (lo >= n) return;
                const std::size_t hi = std::min(n, lo + kChunk);
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace tfwave
