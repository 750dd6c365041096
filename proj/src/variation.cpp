#include "restrictlab/variation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "restrictlab/errors.hpp"

namespace restrictlab::variation {

namespace {

bool is_power_of_two(double t) {
    int e = 0;
    return std::frexp(t, &e) == 0.5;
}

void check_rho(double rho) {
    if (!(rho >= 1.0)) throw DomainError("variation: rho must be >= 1");
    if (std::isinf(rho)) throw DomainError("variation: rho must be finite");
}

}  // namespace

ScaleGrid::ScaleGrid(std::vector<double> scales) : scales_(std::move(scales)) {
    if (scales_.size() < 2) throw ShapeError("ScaleGrid: need at least two scales");
    for (std::size_t i = 0; i < scales_.size(); ++i) {
        if (!(scales_[i] > 0.0) || std::isinf(scales_[i])) throw DomainError("ScaleGrid: scales must be positive");
        if (i > 0 && !(scales_[i] > scales_[i - 1])) throw DomainError("ScaleGrid: scales must increase strictly");
        anchor_.push_back(is_power_of_two(scales_[i]));
    }
}

ScaleGrid ScaleGrid::dyadic(int k_min, int k_max, int points_per_octave) {
    if (k_max <= k_min) throw DomainError("ScaleGrid::dyadic: need k_min < k_max");
    if (points_per_octave < 1) throw DomainError("ScaleGrid::dyadic: points_per_octave must be >= 1");
    std::vector<double> t;
    const int n = points_per_octave * (k_max - k_min);
    for (int j = 0; j <= n; ++j) {
        // Anchors are formed from an integer exponent so exp2 is exact there.
        if (j % points_per_octave == 0) {
            t.push_back(std::exp2(static_cast<double>(k_min + j / points_per_octave)));
        } else {
            t.push_back(std::exp2(k_min + static_cast<double>(j) / points_per_octave));
        }
    }
    return ScaleGrid(std::move(t));
}

std::vector<std::size_t> ScaleGrid::anchors() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (anchor_[i]) out.push_back(i);
    }
    return out;
}

ScaleGrid ScaleGrid::scaled(double factor) const {
    std::vector<double> t(scales_);
    for (double& v : t) v *= factor;
    return ScaleGrid(std::move(t));
}

SampledPath::SampledPath(ScaleGrid g, std::vector<Complex> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size()) throw ShapeError("SampledPath: values and grid differ in length");
}

double maximal(const std::vector<Complex>& values) {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

double maximal(const SampledPath& path) { return maximal(path.values); }

VariationResult rho_variation(const std::vector<Complex>& values, double rho) {
    check_rho(rho);
    const std::size_t m = values.size();
    VariationResult out;
    if (m == 0) return out;
    std::vector<double> best(m, 0.0);
    std::vector<std::ptrdiff_t> prev(m, -1);
    for (std::size_t j = 1; j < m; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const double cand = best[i] + std::pow(std::abs(values[j] - values[i]), rho);
            if (cand > best[j]) {
                best[j] = cand;
                prev[j] = static_cast<std::ptrdiff_t>(i);
            }
        }
    }
    const auto end = static_cast<std::size_t>(std::max_element(best.begin(), best.end()) - best.begin());
    for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(end); j >= 0; j = prev[j]) {
        out.witness.push_back(static_cast<std::size_t>(j));
    }
    std::reverse(out.witness.begin(), out.witness.end());
    out.value = std::pow(best[end], 1.0 / rho);
    return out;
}

VariationResult rho_variation(const SampledPath& path, double rho) { return rho_variation(path.values, rho); }

double partition_sum(const std::vector<Complex>& values, const std::vector<std::size_t>& witness, double rho) {
    double sum = 0.0;
    for (std::size_t l = 1; l < witness.size(); ++l) {
        if (witness[l] <= witness[l - 1] || witness[l] >= values.size()) {
            throw ShapeError("partition_sum: witness must be increasing and in range");
        }
        sum += std::pow(std::abs(values[witness[l]] - values[witness[l - 1]]), rho);
    }
    return std::pow(sum, 1.0 / rho);
}

double brute_force_variation(const SampledPath& path, double rho) {
    check_rho(rho);
    const std::size_t m = path.values.size();
    if (m < 2 || m > 14) throw ShapeError("brute_force_variation: length must lie in [2, 14]");
    double best = 0.0;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        double sum = 0.0;
        int last = -1;
        for (std::size_t i = 0; i < m; ++i) {
            if (!(mask & (1u << i))) continue;
            if (last >= 0) sum += std::pow(std::abs(path.values[i] - path.values[last]), rho);
            last = static_cast<int>(i);
        }
        best = std::max(best, sum);
    }
    return std::pow(best, 1.0 / rho);
}

// Bound for the split. Take a partition t_0 < ... < t_m. An increment whose
// endpoints share a closed octave is a short increment. Otherwise
// t_(j-1) lies in [2^k, 2^(k+1)] and t_j in [2^l, 2^(l+1)] with l > k, and
//   a(t_j) - a(t_(j-1)) = [a(t_j) - a(2^l)] + [a(2^l) - a(2^(k+1))] + [a(2^(k+1)) - a(t_(j-1))],
// so |.|^rho <= 3^(rho-1) times the sum of the three rho-th powers. The middle
// terms over all crossing increments form one anchor partition (<= V_long^rho).
// At most one crossing increment starts and at most one ends in each octave,
// so each outer term is bounded by that octave's V_k^rho, as is the sum of
// its short increments. Hence V^rho <= 3^(rho-1) V_long^rho + (1 + 2 * 3^(rho-1)) sum V_k^rho.
LongShortSplit long_short_split(const SampledPath& path, double rho) {
    check_rho(rho);
    const ScaleGrid& grid = path.grid;
    const auto anchors = grid.anchors();
    if (anchors.size() < 2 || anchors.front() != 0 || anchors.back() != grid.size() - 1) {
        throw ShapeError("long_short_split: grid must start and end on powers of two");
    }
    for (std::size_t a = 1; a < anchors.size(); ++a) {
        if (grid[anchors[a]] != 2.0 * grid[anchors[a - 1]]) {
            throw ShapeError("long_short_split: grid misses a power of two");
        }
    }

    LongShortSplit out;
    out.full = rho_variation(path.values, rho).value;
    std::vector<Complex> anchor_values;
    for (std::size_t i : anchors) anchor_values.push_back(path.values[i]);
    out.long_variation = rho_variation(anchor_values, rho).value;
    double short_sum = 0.0;
    for (std::size_t a = 1; a < anchors.size(); ++a) {
        const std::vector<Complex> octave(path.values.begin() + static_cast<std::ptrdiff_t>(anchors[a - 1]),
                                          path.values.begin() + static_cast<std::ptrdiff_t>(anchors[a]) + 1);
        const double v = rho_variation(octave, rho).value;
        out.shorts.push_back(v);
        short_sum += std::pow(v, rho);
    }
    const double c = std::pow(3.0, rho - 1.0);
    out.combined_bound = std::pow(c * std::pow(out.long_variation, rho) + (1.0 + 2.0 * c) * short_sum, 1.0 / rho);
    if (out.full > out.combined_bound * (1.0 + 1e-12) + 1e-300) {
        throw VerificationError("long_short_split: variation " + std::to_string(out.full) +
                                " exceeds combined bound " + std::to_string(out.combined_bound));
    }
    return out;
}

void write_csv(std::ostream& os, const SampledPath& path) {
    os << "scale,re,im\n";
    char buf[96];
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", path.grid[i], path.values[i].real(),
                      path.values[i].imag());
        os << buf;
    }
}

}  // namespace restrictlab::variation
