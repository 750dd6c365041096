#include "restrictlab/ck.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "restrictlab/errors.hpp"
#include "restrictlab/numerics.hpp"
#include "restrictlab/variation.hpp"

namespace restrictlab::ck {

namespace {

const double kSqrt2 = std::sqrt(2.0);

double lq_weighted(const std::vector<double>& values, const surfaces::FiniteAtomic& atoms, double q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += atoms.atoms[i].weight * std::pow(values[i], q);
    return std::pow(sum, 1.0 / q);
}

// Block transforms F_k(xi_i).
std::vector<std::vector<Complex>> block_transforms(const oracle::RestrictionInstance& inst) {
    std::vector<std::vector<Complex>> out;
    out.reserve(inst.blocks);
    for (int k = 0; k < inst.blocks; ++k) out.push_back(oracle::dft_restriction(inst.block_function(k), inst.model));
    return out;
}

bool within(double ratio, double bound) { return ratio <= bound * (1.0 + 1e-12); }

}  // namespace

AnnularBump::AnnularBump(int order) : order_(order) {
    if (order < 2) throw DomainError("AnnularBump: profile order must be >= 2");
    mass_ = numerics::integrate([this](double u) { return profile(u) / u; }, 1.0, kSqrt2, 0.0, 1e-14);
    sup_ = profile(0.5 * (1.0 + kSqrt2)) / mass_;

    numerics::Rng rng(0x5eed'b0b5ULL + static_cast<std::uint64_t>(order));
    for (int i = 0; i < 20; ++i) {
        const double r = std::pow(10.0, rng.uniform(-3.0, 3.0));
        norm_err_ = std::max(norm_err_, std::fabs(normalization_integral(*this, r) - 1.0));
    }
    if (norm_err_ > 1e-10) throw AccuracyError("AnnularBump: normalization identity violated", norm_err_);
}

double AnnularBump::profile(double r) const {
    if (!(r > 1.0 && r < kSqrt2)) return 0.0;
    return std::exp(-order_ / ((r - 1.0) * (kSqrt2 - r)));
}

double AnnularBump::radial(double r) const { return profile(r) / mass_; }

AnnularBump make_annular_bump(int profile_order) { return AnnularBump(profile_order); }

double normalization_integral(const AnnularBump& phi, double r) {
    if (!(r > 0.0) || std::isinf(r)) throw DomainError("normalization_integral: need 0 < |x| < infinity");
    return numerics::integrate([&](double s) { return phi.radial(s * r) / s; }, 1.0 / r, kSqrt2 / r, 0.0, 1e-14);
}

std::pair<double, double> psi_k_support(const PartitionFunctions& pf, int k) {
    if (pf.half == HalfOctave::Lower) return {std::exp2(-k + 0.5), std::exp2(-k + 1.5)};
    return {std::exp2(-k), std::exp2(-k + 1.0)};
}

double psi_k_radial(const PartitionFunctions& pf, int k, double r) {
    const auto [r_lo, r_hi] = psi_k_support(pf, k);
    if (!(r > r_lo && r < r_hi)) return 0.0;
    const double t_lo = pf.half == HalfOctave::Lower ? std::exp2(k - 1.0) : std::exp2(k - 0.5);
    const double t_hi = pf.half == HalfOctave::Lower ? std::exp2(k - 0.5) : std::exp2(static_cast<double>(k));
    // Only t with 1 <= t r <= sqrt2 contribute.
    const double a = std::max(t_lo, 1.0 / r);
    const double b = std::min(t_hi, kSqrt2 / r);
    if (!(b > a)) return 0.0;
    const auto& phi = pf.generator;
    return numerics::integrate([&](double t) { return phi.radial(t * r) / t; }, a, b, 1e-13 * phi.sup_norm());
}

Complex psi_k(const PartitionFunctions& pf, int k, const Eigen::VectorXd& x) {
    if (!x.allFinite()) throw DomainError("psi_k: point must be finite");
    return psi_k_radial(pf, k, x.norm());
}

double psi_k_sup_constant(const PartitionFunctions& pf, int samples) {
    const auto [r_lo, r_hi] = psi_k_support(pf, pf.M);
    double best = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, (i + 0.5) / samples);
        best = std::max(best, std::fabs(psi_k_radial(pf, pf.M, r)));
    }
    return best / pf.generator.sup_norm();
}

CkConstants ck_constants(double p, double q, double rho) {
    if (!(p >= 1.0 && p <= 2.0)) throw DomainError("ck_constants: p must lie in [1, 2]");
    if (!(q > p)) throw DomainError("ck_constants: need q > p");
    if (!(rho > p)) throw DomainError("ck_constants: need rho > p");
    const double a = 1.0 - std::exp2(1.0 / q - 1.0 / p);
    const double b = 1.0 - std::exp2(1.0 / rho - 1.0 / p);
    return {1.0 / a, 4.0 / (a * b)};
}

std::size_t greedy_split(const std::vector<double>& masses) {
    if (masses.empty()) throw ShapeError("greedy_split: empty mass list");
    double total = 0.0;
    for (double m : masses) {
        if (!(m >= 0.0) || std::isinf(m)) throw DomainError("greedy_split: masses must be finite and nonnegative");
        total += m;
    }
    if (!(total > 0.0)) throw DomainError("greedy_split: total mass must be positive");
    double cumulative = 0.0;
    for (std::size_t k = 0; k < masses.size(); ++k) {
        cumulative += masses[k];
        if (cumulative > 0.5 * total) return k;
    }
    return masses.size() - 1;  // unreachable for exact arithmetic
}

StoppingDecomposition stopping_decomposition(const std::vector<std::vector<Complex>>& partial, bool first_maximum) {
    StoppingDecomposition out;
    if (partial.empty()) return out;
    const std::size_t nodes = partial.front().size();
    out.stop.assign(nodes, 0);
    out.sets.assign(partial.size(), {});
    for (std::size_t i = 0; i < nodes; ++i) {
        double best = -1.0;
        for (std::size_t n = 0; n < partial.size(); ++n) {
            const double v = std::abs(partial[n][i]);
            if (v > best || (!first_maximum && v == best)) {
                best = v;
                out.stop[i] = n;
            }
        }
        out.sets[out.stop[i]].push_back(i);
    }
    return out;
}

nlohmann::json to_json(const CkReport& r) {
    return {{"seed", r.seed},   {"p", r.p},         {"q", r.q},         {"rho", r.rho},
            {"lhs", r.lhs},     {"rhs", r.rhs},     {"ratio", r.ratio}, {"c_restr", r.c_restr},
            {"bound", r.bound}, {"empirical", r.empirical}, {"pass", r.pass}};
}

double empirical_c_restr(const oracle::RestrictionInstance& inst) {
    const auto F = block_transforms(inst);
    const double p = inst.model.p;
    const double q = inst.model.q;
    const std::size_t nodes = inst.model.atoms.atoms.size();
    double best = 0.0;
    for (int a = 0; a < inst.blocks; ++a) {
        std::vector<Complex> sum(nodes, 0.0);
        double mass = 0.0;
        for (int b = a; b < inst.blocks; ++b) {
            for (std::size_t i = 0; i < nodes; ++i) sum[i] += F[b][i];
            mass += inst.block_mass(b);
            if (mass == 0.0) continue;
            std::vector<double> mod(nodes);
            for (std::size_t i = 0; i < nodes; ++i) mod[i] = std::abs(sum[i]);
            best = std::max(best, lq_weighted(mod, inst.model.atoms, q) / std::pow(mass, 1.0 / p));
        }
    }
    return best;
}

CkReport ck_max_verify(const oracle::RestrictionInstance& inst, bool first_maximum) {
    CkReport rep;
    rep.seed = inst.seed;
    rep.p = inst.model.p;
    rep.q = inst.model.q;
    const auto F = block_transforms(inst);
    const std::size_t nodes = inst.model.atoms.atoms.size();

    std::vector<std::vector<Complex>> partial(inst.blocks, std::vector<Complex>(nodes, 0.0));
    for (int n = 0; n < inst.blocks; ++n) {
        for (std::size_t i = 0; i < nodes; ++i) partial[n][i] = (n > 0 ? partial[n - 1][i] : 0.0) + F[n][i];
    }
    const auto stop = stopping_decomposition(partial, first_maximum);
    std::vector<double> lhs_vals(nodes);
    for (std::size_t i = 0; i < nodes; ++i) lhs_vals[i] = std::abs(partial[stop.stop[i]][i]);
    rep.lhs = lq_weighted(lhs_vals, inst.model.atoms, rep.q);
    rep.rhs = oracle::lp_counting(inst.f, rep.p);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;

    rep.empirical = rep.p != 1.0;
    rep.c_restr = rep.empirical ? empirical_c_restr(inst) : oracle::exact_c_restr(inst.model);
    rep.bound = ck_constants(rep.p, rep.q, rep.q).A * rep.c_restr;
    rep.pass = within(rep.ratio, rep.bound);
    if (!rep.pass && !rep.empirical) {
        throw VerificationError("ck_max_verify: ratio " + std::to_string(rep.ratio) + " exceeds bound " +
                                    std::to_string(rep.bound),
                                oracle::to_json(inst).dump());
    }
    return rep;
}

CkReport ck_var_verify(const oracle::RestrictionInstance& inst, double rho) {
    CkReport rep;
    rep.seed = inst.seed;
    rep.p = inst.model.p;
    rep.q = inst.model.q;
    rep.rho = rho;
    const CkConstants c = ck_constants(rep.p, rep.q, rho);
    const auto F = block_transforms(inst);
    const std::size_t nodes = inst.model.atoms.atoms.size();

    std::vector<double> lhs_vals(nodes);
    std::vector<Complex> path(inst.blocks + 1);
    for (std::size_t i = 0; i < nodes; ++i) {
        path[0] = 0.0;
        for (int n = 0; n < inst.blocks; ++n) path[n + 1] = path[n] + F[n][i];
        lhs_vals[i] = variation::rho_variation(path, rho).value;
    }
    rep.lhs = lq_weighted(lhs_vals, inst.model.atoms, rep.q);
    rep.rhs = oracle::lp_counting(inst.f, rep.p);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;

    rep.empirical = rep.p != 1.0;
    rep.c_restr = rep.empirical ? empirical_c_restr(inst) : oracle::exact_c_restr(inst.model);
    rep.bound = c.B * rep.c_restr;
    rep.pass = within(rep.ratio, rep.bound);
    if (!rep.pass && !rep.empirical) {
        throw VerificationError("ck_var_verify: ratio " + std::to_string(rep.ratio) + " exceeds bound " +
                                    std::to_string(rep.bound),
                                oracle::to_json(inst).dump());
    }
    return rep;
}

MollifierFamily::MollifierFamily(measures::AveragingMeasure mu, AnnularBump phi)
    : mu_(std::move(mu)), phi_(std::move(phi)) {}

double MollifierFamily::radial(double s, double r) const {
    if (!(s > 0.0)) throw DomainError("MollifierFamily: s must be positive");
    const double p = phi_.radial(r);
    if (p == 0.0) return 0.0;
    const double u = r / s;
    return p * u * measures::mu_hat_radial_derivative(mu_, u);
}

std::vector<DecayRow> psi_s_decay(const MollifierFamily& mf, const std::vector<double>& s_grid) {
    const auto doc = measures::documented_decay(mf.measure());
    std::vector<DecayRow> rows(s_grid.size());
    numerics::parallel_for(s_grid.size(), [&](std::size_t j) {
        const double s = s_grid[j];
        if (!(s > 0.0) || std::isinf(s)) throw DomainError("psi_s_decay: s must be positive and finite");
        DecayRow row;
        row.s = s;
        constexpr int kShell = 1000;
        for (int i = 0; i < kShell; ++i) {
            const double r = 1.0 + (kSqrt2 - 1.0) * (i + 0.5) / kShell;
            row.sup = std::max(row.sup, std::fabs(mf.radial(s, r)));
        }
        row.envelope = doc.D * std::min(std::pow(s, doc.eta), 1.0 / s);
        row.ratio = row.envelope > 0.0 ? row.sup / row.envelope : 0.0;
        rows[j] = row;
    });
    return rows;
}

DecompositionCheck decomposition_check(const MollifierFamily& mf, double a, double b, const Eigen::VectorXd& x) {
    if (!(a > 0.0) || !(b >= a)) throw DomainError("decomposition_check: need 0 < a <= b");
    if (x.size() != mf.measure().dimension()) throw ShapeError("decomposition_check: point has wrong dimension");
    DecompositionCheck out;
    const double r = x.norm();
    if (a == b || r == 0.0) return out;
    const auto& mu = mf.measure();
    out.lhs = measures::mu_hat_radial(mu, b * r) - measures::mu_hat_radial(mu, a * r);

    auto inner = [&](double s) {
        const double lo = std::max(s * a, 1.0 / r);
        const double hi = std::min(s * b, kSqrt2 / r);
        if (!(hi > lo)) return 0.0;
        return numerics::integrate([&](double t) { return mf.radial(s, t * r) / t; }, lo, hi, 1e-12) / s;
    };
    // Kinks of the s-integrand where the clipped t-interval changes form.
    std::vector<double> cuts = {1.0 / (b * r), kSqrt2 / (b * r), 1.0 / (a * r), kSqrt2 / (a * r)};
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        if (cuts[i] > cuts[i - 1]) out.rhs += numerics::integrate(inner, cuts[i - 1], cuts[i], 1e-11);
    }
    out.abs_err = std::fabs(out.lhs - out.rhs);
    if (out.abs_err > 1e-3 * (1.0 + std::fabs(out.lhs))) {
        throw VerificationError("decomposition_check: identity violated, error " + std::to_string(out.abs_err));
    }
    return out;
}

}  // namespace restrictlab::ck
