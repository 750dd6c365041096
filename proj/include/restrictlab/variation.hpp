#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace restrictlab::variation {

using Complex = std::complex<double>;

/// Strictly increasing positive scales, at least two of them. A scale is an
/// octave anchor when it is exactly an integer power of two.
class ScaleGrid {
public:
    /// Throws ShapeError for fewer than two scales, DomainError otherwise.
    explicit ScaleGrid(std::vector<double> scales);

    /// 2^(k_min + j / points_per_octave) for j = 0 .. points_per_octave * (k_max - k_min).
    static ScaleGrid dyadic(int k_min, int k_max, int points_per_octave);

    std::size_t size() const { return scales_.size(); }
    const std::vector<double>& scales() const { return scales_; }
    double operator[](std::size_t i) const { return scales_[i]; }
    bool is_anchor(std::size_t i) const { return anchor_[i]; }
    std::vector<std::size_t> anchors() const;
    ScaleGrid scaled(double factor) const;

private:
    std::vector<double> scales_;
    std::vector<bool> anchor_;
};

struct SampledPath {
    /// Throws ShapeError when the lengths differ.
    SampledPath(ScaleGrid grid, std::vector<Complex> values);

    ScaleGrid grid;
    std::vector<Complex> values;
};

struct VariationResult {
    double value = 0.0;
    std::vector<std::size_t> witness;  // increasing indices
};

/// max_j |a_j|; 0 for an empty sequence.
double maximal(const std::vector<Complex>& values);
double maximal(const SampledPath& path);

/// Exact rho-variation sup over increasing index subsequences of
/// (sum |a_(i_l) - a_(i_(l-1))|^rho)^(1/rho), by the O(m^2) recursion
/// V_j = max(0, max_(i<j) V_i + |a_j - a_i|^rho). The witness is the chain
/// realizing the maximum; a path with no increments has witness {0}.
VariationResult rho_variation(const std::vector<Complex>& values, double rho);
VariationResult rho_variation(const SampledPath& path, double rho);

/// (sum over consecutive witness indices of |a_j - a_i|^rho)^(1/rho), summed in index order.
double partition_sum(const std::vector<Complex>& values, const std::vector<std::size_t>& witness, double rho);

/// Exhaustive enumeration over all subsets of the grid. Throws ShapeError
/// unless 2 <= length <= 14.
double brute_force_variation(const SampledPath& path, double rho);

struct LongShortSplit {
    double full = 0.0;
    double long_variation = 0.0;
    std::vector<double> shorts;  // one per octave [2^k, 2^(k+1)]
    double combined_bound = 0.0;
};

/// Splits the rho-variation into the variation along the anchors and the
/// variations inside each closed octave, and checks
///   V^rho <= 3^(rho-1) V_long^rho + (1 + 2 * 3^(rho-1)) sum_k V_k^rho.
/// The grid must start and end on anchors and contain every power of two in
/// between (ShapeError otherwise). Throws VerificationError if the bound fails.
LongShortSplit long_short_split(const SampledPath& path, double rho);

/// CSV with columns scale,re,im.
void write_csv(std::ostream& os, const SampledPath& path);

}  // namespace restrictlab::variation
