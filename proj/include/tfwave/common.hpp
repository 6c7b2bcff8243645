#ifndef TFWAVE_COMMON_HPP
#define TFWAVE_COMMON_HPP

/*
    Shared infrastructure: error taxonomy, deterministic counter-based RNG,
    and a slot-writing parallel loop whose results do not depend on the
    thread count.
*/

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace tfwave {

using cplx = std::complex<double>;

// Validation failures (bad config, malformed input, mismatched grids).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

class RangeError : public std::out_of_range {
public:
    explicit RangeError(const std::string& msg) : std::out_of_range(msg) {}
};

// Failures of a numeric procedure (non-convergence, refused certificate).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// --- deterministic RNG -----------------------------------------------------
//
// Counter-based: every draw is a pure function of (seed, key...), so results
// are identical across thread schedules and platforms.

std::uint64_t mix_u64(std::uint64_t x);
std::uint64_t hash_key(std::uint64_t seed, std::int64_t a, std::int64_t b, std::uint64_t salt);

// Uniform double in [0,1) from a 64-bit key.
double u01_from_key(std::uint64_t key);

// Small stateful generator for test probes and start vectors.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : state_(mix_u64(seed ^ 0x9e3779b97f4a7c15ull)) {}
    std::uint64_t next_u64();
    double uniform();                       // [0,1)
    double uniform(double lo, double hi);
    double normal();                        // Box-Muller, one value per call
    cplx unit_phase();                      // e^{i theta}, theta uniform
private:
    std::uint64_t state_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

// --- deterministic parallel loop --------------------------------------------
//
// Runs fn(i) for i in [0, n). Each index writes only its own output slot, so
// the result is bit-identical for any thread count. Thread count comes from
// TFWAVE_THREADS (or hardware concurrency), overridable for tests.

void set_thread_count(int n);   // n <= 0 restores the environment default
int thread_count();

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace tfwave

#endif
