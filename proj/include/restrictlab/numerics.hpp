#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace restrictlab::numerics {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Adaptive 15-point Gauss-Kronrod on [a, b]. Converged when the error
/// estimate is below max(abs_tol, rel_tol * |I|); throws QuadratureError otherwise.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol = 0.0, int max_depth = 30);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root-mean-square deviation from the line
};

/// Ordinary least squares y ~ slope * x + intercept. Throws FitError for fewer
/// than two points or a degenerate x range.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Log-spaced grid of n points from lo to hi inclusive.
std::vector<double> logspace(double lo, double hi, int n);

/// Deterministic random stream. The engine output sequence is fixed by the
/// standard; the conversion to doubles is done here so results are portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi);
    double normal();
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Child seed for stream `index` of a root seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

/// Worker count: RESTRICTLAB_THREADS when set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads, static
/// contiguous chunks. Results must be written to per-index slots; any exception
/// thrown by a worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace restrictlab::numerics
