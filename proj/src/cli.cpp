#include "restrictlab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "restrictlab/ck.hpp"
#include "restrictlab/errors.hpp"
#include "restrictlab/experiments.hpp"
#include "restrictlab/measures.hpp"
#include "restrictlab/numerics.hpp"
#include "restrictlab/oracle.hpp"
#include "restrictlab/specfun.hpp"
#include "restrictlab/surfaces.hpp"
#include "restrictlab/testfn.hpp"
#include "restrictlab/variation.hpp"

namespace restrictlab::cli {

namespace {

using FieldRef = std::variant<int*, double*, std::string*, std::uint64_t*>;
using Complex = std::complex<double>;

std::vector<std::pair<std::string, FieldRef>> fields(RunConfig& c) {
    return {{"seed", &c.seed},
            {"d", &c.d},
            {"p", &c.p},
            {"q", &c.q},
            {"rho", &c.rho},
            {"measure", &c.measure},
            {"surface", &c.surface},
            {"radius", &c.radius},
            {"inner", &c.inner},
            {"outer", &c.outer},
            {"resolution", &c.resolution},
            {"points-per-octave", &c.points_per_octave},
            {"k-min", &c.k_min},
            {"k-max", &c.k_max},
            {"instances", &c.instances},
            {"max-blocks", &c.max_blocks},
            {"max-lattice", &c.max_lattice},
            {"max-atoms", &c.max_atoms},
            {"cases", &c.cases},
            {"max-len", &c.max_len},
            {"alpha-max", &c.alpha_max},
            {"z-max", &c.z_max},
            {"z-points", &c.z_points},
            {"r-min", &c.r_min},
            {"r-max", &c.r_max},
            {"samples", &c.samples},
            {"order", &c.order},
            {"delta-exp-min", &c.delta_exp_min},
            {"delta-exp-max", &c.delta_exp_max},
            {"eps-min", &c.eps_min},
            {"eps-max", &c.eps_max},
            {"eps-points", &c.eps_points},
            {"out-dir", &c.out_dir}};
}

struct Command {
    std::string name;
    std::string help;
    std::vector<std::string> options;
};

const std::vector<Command>& commands() {
    static const std::vector<std::string> scan_opts = {"measure", "d",    "surface", "radius", "inner",
                                                       "outer",   "resolution", "points-per-octave",
                                                       "k-min",   "k-max", "p",  "q",      "rho"};
    static const std::vector<Command> list = {
        {"bessel-table", "Tabulate J_alpha(z) for alpha = 0, 1/2, ..., alpha-max", {"alpha-max", "z-max", "z-points"}},
        {"measure-decay", "Fit the gradient decay exponent of an averaging measure", {"measure", "d", "r-min", "r-max", "samples"}},
        {"variation-selftest", "Check the variation DP against brute force and the long/short bound", {"cases", "max-len", "rho"}},
        {"ck-verify", "Christ-Kiselev maximal and variational bounds on seeded discrete instances",
         {"d", "p", "q", "rho", "instances", "max-blocks", "max-lattice", "max-atoms"}},
        {"mollifier-check", "Bump normalization, mollifier decay envelope and the decomposition identity", {"measure", "d", "order"}},
        {"scan", "Maximal and variational aggregates of a Gaussian over a surface", scan_opts},
        {"knapp", "Knapp cap scaling slope on the sphere", {"d", "p", "q", "resolution", "delta-exp-min", "delta-exp-max"}},
        {"square-function", "Square-function bound for an annular bump",
         {"d", "p", "q", "order", "resolution", "surface", "radius", "inner", "outer"}},
        {"lebesgue", "Convergence rate of shrinking averages at a surface point", {"measure", "d", "eps-min", "eps-max", "eps-points"}},
        {"squared-trick", "Scan of the autocorrelation h with h_hat = |f_hat|^2", scan_opts},
    };
    return list;
}

struct Outcome {
    nlohmann::json summary;
    std::string csv;  // body without the config header; empty for JSON-only commands
    bool ok = true;
    std::string failure;  // serialized reproducer when ok is false
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class... Ts>
std::string csv_row(const Ts&... values) {
    std::string out;
    ((out += (out.empty() ? "" : ",") + [](const auto& v) {
          if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) {
              return fmt(v);
          } else {
              return std::to_string(v);
          }
      }(values)),
     ...);
    return out + "\n";
}

surfaces::SurfaceSpec surface_spec(const RunConfig& c) {
    if (c.surface == "sphere") return surfaces::Sphere{c.d};
    if (c.surface == "paraboloid") return surfaces::ParaboloidPatch{c.d, c.radius};
    return surfaces::ConePatch{c.d, c.inner, c.outer};
}

std::string node_header(int d) {
    std::string h;
    for (int k = 0; k < d; ++k) h += "x" + std::to_string(k) + ",";
    return h;
}

std::string scan_csv(const experiments::ScanReport& rep, int d) {
    std::string out = node_header(d) + "weight,maximal,variation,single\n";
    for (std::size_t i = 0; i < rep.nodes.size(); ++i) {
        for (int k = 0; k < d; ++k) out += fmt(rep.nodes[i][k]) + ",";
        out += csv_row(rep.weights[i], rep.maximal[i], rep.variation[i], rep.single[i]);
    }
    return out;
}

nlohmann::json scan_json(const experiments::ScanReport& rep) {
    return {{"surface", rep.surface},
            {"measure", rep.measure},
            {"nodes", rep.nodes.size()},
            {"scales", rep.scales},
            {"maximal_aggregate", rep.maximal_aggregate},
            {"variation_aggregate", rep.variation_aggregate},
            {"single_aggregate", rep.single_aggregate},
            {"f_norm", rep.f_norm},
            {"maximal_ratio", rep.maximal_ratio},
            {"variation_ratio", rep.variation_ratio},
            {"mechanism_holds", rep.mechanism_holds},
            {"refined", rep.refined},
            {"refined_maximal_ratio", rep.refined_maximal_ratio},
            {"refined_variation_ratio", rep.refined_variation_ratio},
            {"refinement_change", rep.refinement_change},
            {"stable", rep.stable}};
}

Outcome cmd_bessel_table(const RunConfig& c) {
    Outcome out;
    out.csv = "alpha,z,J\n";
    int rows = 0;
    for (int twice = 0; twice <= static_cast<int>(std::floor(2.0 * c.alpha_max + 1e-9)); ++twice) {
        const double alpha = 0.5 * twice;
        for (int i = 0; i < c.z_points; ++i) {
            const double z = c.z_max * i / (c.z_points - 1);
            out.csv += csv_row(alpha, z, specfun::bessel_j(alpha, z));
            ++rows;
        }
    }
    out.summary = {{"rows", rows}};
    return out;
}

Outcome cmd_measure_decay(const RunConfig& c) {
    Outcome out;
    const auto mu = measures::measure_from_name(c.measure, c.d);
    const auto prof = measures::decay_profile(mu, c.r_min, c.r_max, c.samples);
    const auto doc = measures::documented_decay(mu);
    out.csv = "r,grad\n";
    for (double r : numerics::logspace(c.r_min, c.r_max, c.samples)) {
        out.csv += csv_row(r, std::fabs(measures::mu_hat_radial_derivative(mu, r)));
    }
    // The Gaussian decays faster than any power, so only its documented
    // constant is certified; the Bessel measures must reproduce their exponent.
    const bool vanishing = mu.kind() == measures::MeasureKind::ZeroGradient;
    const bool gaussian = mu.kind() == measures::MeasureKind::GaussianDensity;
    out.ok = vanishing || (gaussian ? prof.D_est <= doc.D : std::fabs(prof.eta_est - doc.eta) <= 0.1);
    out.summary = {{"measure", mu.name()},
                   {"eta_documented", doc.eta},
                   {"D_documented", doc.D},
                   {"eta_estimate", vanishing ? nlohmann::json("infinity") : nlohmann::json(prof.eta_est)},
                   {"D_estimate", prof.D_est},
                   {"residual", prof.residual},
                   {"pass", out.ok}};
    return out;
}

nlohmann::json path_json(const std::vector<Complex>& v, double rho) {
    nlohmann::json vals = nlohmann::json::array();
    for (const auto& x : v) vals.push_back({x.real(), x.imag()});
    return {{"rho", rho}, {"values", vals}};
}

Outcome cmd_variation_selftest(const RunConfig& c) {
    Outcome out;
    numerics::Rng rng(c.seed);
    const std::vector<double> rhos = {1.2, 2.0, 3.0, 8.0};
    out.csv = "case,length,rho,dp,brute\n";
    double worst = 0.0;
    auto fail = [&](const std::string& what, const std::vector<Complex>& v, double rho) {
        out.ok = false;
        nlohmann::json j = path_json(v, rho);
        j["failure"] = what;
        out.failure = j.dump();
    };
    for (int k = 0; k < c.cases && out.ok; ++k) {
        const int len = static_cast<int>(rng.integer(2, c.max_len));
        std::vector<Complex> v(len);
        for (auto& x : v) x = Complex(rng.normal(), rng.normal());
        std::vector<double> grid(len);
        for (int i = 0; i < len; ++i) grid[i] = i + 1.0;
        const variation::SampledPath path(variation::ScaleGrid(grid), v);

        std::vector<double> per_rho = {c.rho};
        per_rho.insert(per_rho.end(), rhos.begin(), rhos.end());
        double previous = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < per_rho.size(); ++r) {
            const double rho = per_rho[r];
            const auto dp = variation::rho_variation(path, rho);
            const double brute = variation::brute_force_variation(path, rho);
            const double err = std::fabs(dp.value - brute) / std::max(1.0, brute);
            worst = std::max(worst, err);
            out.csv += csv_row(k, len, rho, dp.value, brute);
            if (err > 1e-12) return fail("dp differs from brute force", v, rho), out;
            if (std::fabs(variation::partition_sum(v, dp.witness, rho) - dp.value) > 1e-12 * std::max(1.0, dp.value)) {
                return fail("witness does not reproduce the value", v, rho), out;
            }
            if (r > 0) {
                if (dp.value > previous * (1.0 + 1e-12)) return fail("variation increased with rho", v, rho), out;
                previous = dp.value;
            } else {
                previous = std::numeric_limits<double>::infinity();
            }
            // Dropping one scale can only decrease the variation.
            if (len > 2) {
                std::vector<Complex> coarse = v;
                coarse.erase(coarse.begin() + rng.integer(0, len - 1));
                if (variation::rho_variation(coarse, rho).value > dp.value * (1.0 + 1e-12)) {
                    return fail("refinement decreased the variation", v, rho), out;
                }
            }
        }

        const int ppo = static_cast<int>(rng.integer(1, 8));
        const auto grid4 = variation::ScaleGrid::dyadic(0, 4, ppo);
        std::vector<Complex> w(grid4.size());
        for (auto& x : w) x = Complex(rng.normal(), rng.normal());
        for (double rho : {1.5, 2.0, 4.0}) {
            try {
                variation::long_short_split(variation::SampledPath(grid4, w), rho);
            } catch (const VerificationError& e) {
                return fail(e.what(), w, rho), out;
            }
        }
    }
    out.summary = {{"cases", c.cases}, {"max_relative_error", worst}, {"pass", out.ok}};
    return out;
}

Outcome cmd_ck_verify(const RunConfig& c) {
    Outcome out;
    oracle::InstanceParams params;
    params.d = c.d;
    params.max_lattice = c.max_lattice;
    params.max_blocks = c.max_blocks;
    params.max_atoms = c.max_atoms;
    params.p = c.p;
    params.q = c.q;

    const auto n = static_cast<std::size_t>(c.instances);
    std::vector<ck::CkReport> max_reports(n);
    std::vector<ck::CkReport> var_reports(n);
    std::vector<std::string> failures(n);
    std::vector<int> blocks(n);
    std::vector<std::size_t> lattice(n);
    numerics::parallel_for(n, [&](std::size_t i) {
        const auto inst = oracle::random_instance(numerics::derive_seed(c.seed, i), params);
        blocks[i] = inst.blocks;
        lattice[i] = inst.f.size();
        try {
            max_reports[i] = ck::ck_max_verify(inst);
            var_reports[i] = ck::ck_var_verify(inst, c.rho);
        } catch (const VerificationError& e) {
            failures[i] = e.instance();
            max_reports[i].pass = false;
        }
    });

    out.csv = "index,seed,blocks,lattice,max_ratio,max_bound,var_ratio,var_bound,pass\n";
    nlohmann::json list = nlohmann::json::array();
    int passing = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool pass = failures[i].empty() && max_reports[i].pass && var_reports[i].pass;
        passing += pass ? 1 : 0;
        out.csv += csv_row(i, numerics::derive_seed(c.seed, i), blocks[i], lattice[i], max_reports[i].ratio,
                           max_reports[i].bound, var_reports[i].ratio, var_reports[i].bound, static_cast<int>(pass));
        list.push_back({{"maximal", ck::to_json(max_reports[i])}, {"variational", ck::to_json(var_reports[i])}});
        if (!failures[i].empty() && out.failure.empty()) {
            out.ok = false;
            out.failure = failures[i];
        }
    }
    const bool empirical = c.p != 1.0;
    out.summary = {{"instances", c.instances},
                   {"passing", passing},
                   {"empirical", empirical},
                   {"reports", list},
                   {"pass", out.ok && (empirical || passing == c.instances)}};
    out.ok = out.ok && (empirical || passing == c.instances);
    return out;
}

Outcome cmd_mollifier_check(const RunConfig& c) {
    Outcome out;
    const ck::AnnularBump phi(c.order);
    const ck::MollifierFamily mf(measures::measure_from_name(c.measure, c.d), phi);
    const auto rows = ck::psi_s_decay(mf, numerics::logspace(1e-3, 1e3, 61));
    const double C = mf.envelope_constant();
    double max_ratio = 0.0;
    out.csv = "s,sup,envelope,ratio\n";
    for (const auto& r : rows) {
        out.csv += csv_row(r.s, r.sup, r.envelope, r.ratio);
        max_ratio = std::max(max_ratio, r.ratio);
    }
    const bool decay_ok = max_ratio <= C * (1.0 + 1e-9);

    numerics::Rng rng(c.seed);
    nlohmann::json decomp = nlohmann::json::array();
    bool decomp_ok = true;
    for (int i = 0; i < 10 && decomp_ok; ++i) {
        const double a = std::pow(10.0, rng.uniform(-1.0, 0.5));
        const double b = a * std::pow(10.0, rng.uniform(0.05, 1.0));
        Eigen::VectorXd x(c.d);
        for (int k = 0; k < c.d; ++k) x[k] = rng.normal();
        x *= std::pow(10.0, rng.uniform(-0.5, 0.5)) / x.norm();
        try {
            const auto chk = ck::decomposition_check(mf, a, b, x);
            decomp.push_back({{"a", a}, {"b", b}, {"r", x.norm()}, {"lhs", chk.lhs}, {"rhs", chk.rhs}, {"abs_err", chk.abs_err}});
        } catch (const VerificationError& e) {
            decomp_ok = false;
            out.failure = nlohmann::json{{"a", a}, {"b", b}, {"x", std::vector<double>(x.data(), x.data() + c.d)},
                                         {"error", e.what()}}.dump();
        }
    }
    out.ok = decay_ok && decomp_ok && phi.normalization_error() <= 1e-10;
    if (!decay_ok && out.failure.empty()) out.failure = nlohmann::json{{"max_ratio", max_ratio}, {"C", C}}.dump();
    out.summary = {{"measure", mf.measure().name()},
                   {"normalization_error", phi.normalization_error()},
                   {"envelope_constant", C},
                   {"max_decay_ratio", max_ratio},
                   {"decomposition", decomp},
                   {"pass", out.ok}};
    return out;
}

experiments::ScanOptions scan_options(const RunConfig& c) {
    experiments::ScanOptions o;
    o.resolution = c.resolution;
    o.k_min = c.k_min;
    o.k_max = c.k_max;
    o.points_per_octave = c.points_per_octave;
    return o;
}

Outcome cmd_scan(const RunConfig& c) {
    Outcome out;
    const experiments::ExponentTriple triple(c.d, c.p, c.q, c.rho);
    const auto rep = experiments::maximal_variational_scan(testfn::GaussianPacket::standard(c.d),
                                                           measures::measure_from_name(c.measure, c.d),
                                                           surface_spec(c), triple, scan_options(c));
    out.csv = scan_csv(rep, c.d);
    out.ok = rep.stable && rep.mechanism_holds;
    out.summary = scan_json(rep);
    out.summary["in_sphere_range"] = triple.in_sphere_range();
    out.summary["in_cone_range"] = triple.in_cone_range();
    out.summary["in_tomas_stein"] = triple.in_tomas_stein();
    if (!out.ok) out.failure = out.summary.dump();
    return out;
}

Outcome cmd_knapp(const RunConfig& c) {
    Outcome out;
    std::vector<double> deltas;
    for (int e = c.delta_exp_min; e <= c.delta_exp_max; ++e) deltas.push_back(std::exp2(-e));
    const auto rep = experiments::knapp_scan(c.d, c.p, c.q, deltas, c.resolution);
    out.csv = "delta,ratio\n";
    for (std::size_t i = 0; i < deltas.size(); ++i) out.csv += csv_row(rep.deltas[i], rep.ratios[i]);
    out.summary = {{"threshold", rep.threshold},
                   {"slope", rep.slope},
                   {"predicted_slope", rep.predicted_slope},
                   {"residual", rep.residual},
                   {"predicted_bounded", rep.predicted_bounded},
                   {"verdict", rep.verdict}};
    return out;
}

Outcome cmd_square_function(const RunConfig& c) {
    Outcome out;
    const ck::AnnularBump phi(c.order);
    const auto quad = surfaces::quadrature(surface_spec(c), c.resolution);
    const auto rep = experiments::square_function_check(testfn::GaussianPacket::standard(c.d), phi, quad, c.p, c.q);
    const double scalar = experiments::scalar_square_step(phi, c.p, c.seed);
    out.ok = rep.pass && scalar <= 1.0 + 1e-9;
    out.csv = "lhs,rhs,ratio,bound,c_restr_empirical,scalar_step_ratio,pass\n" +
              csv_row(rep.lhs, rep.rhs, rep.ratio, rep.bound, rep.c_restr_empirical, scalar, out.ok ? 1 : 0);
    out.summary = {{"lhs", rep.lhs},
                   {"rhs", rep.rhs},
                   {"ratio", rep.ratio},
                   {"bound", rep.bound},
                   {"c_restr_empirical", rep.c_restr_empirical},
                   {"t_nodes", rep.t_nodes},
                   {"scalar_step_ratio", scalar},
                   {"pass", out.ok}};
    if (!out.ok) out.failure = out.summary.dump();
    return out;
}

Outcome cmd_lebesgue(const RunConfig& c) {
    Outcome out;
    auto eps = numerics::logspace(c.eps_max, c.eps_min, c.eps_points);
    Eigen::VectorXd omega = Eigen::VectorXd::Zero(c.d);
    omega[0] = 1.0;
    const auto rep = experiments::lebesgue_point_experiment(testfn::GaussianPacket::standard(c.d),
                                                            measures::measure_from_name(c.measure, c.d), omega, eps);
    out.csv = "eps,error\n";
    for (std::size_t i = 0; i < eps.size(); ++i) out.csv += csv_row(rep.eps[i], rep.errors[i]);
    out.ok = rep.exact || rep.slope >= 1.9;
    out.summary = {{"exact", rep.exact},
                   {"monotone", rep.monotone},
                   {"slope", rep.exact ? nlohmann::json("infinity") : nlohmann::json(rep.slope)},
                   {"residual", rep.residual},
                   {"pass", out.ok}};
    if (!out.ok) out.failure = out.summary.dump();
    return out;
}

Outcome cmd_squared_trick(const RunConfig& c) {
    Outcome out;
    const experiments::ExponentTriple triple(c.d, c.p, c.q, c.rho);
    const auto rep = experiments::squared_average_trick(testfn::GaussianPacket::standard(c.d),
                                                        measures::measure_from_name(c.measure, c.d), surface_spec(c),
                                                        triple, scan_options(c), c.seed);
    out.csv = scan_csv(rep.scan, c.d);
    out.ok = rep.transform_error <= 1e-8 && rep.young_holds && rep.scan.stable && rep.scan.mechanism_holds;
    out.summary = {{"transform_error", rep.transform_error},
                   {"p_tilde", rep.p_tilde},
                   {"q_tilde", rep.q_tilde},
                   {"h_norm", rep.h_norm},
                   {"young_bound", rep.young_bound},
                   {"young_holds", rep.young_holds},
                   {"certificate", rep.certificate},
                   {"scan", scan_json(rep.scan)},
                   {"pass", out.ok}};
    if (!out.ok) out.failure = out.summary.dump();
    return out;
}

Outcome dispatch(const RunConfig& c) {
    static const std::map<std::string, Outcome (*)(const RunConfig&)> table = {
        {"bessel-table", cmd_bessel_table},   {"measure-decay", cmd_measure_decay},
        {"variation-selftest", cmd_variation_selftest}, {"ck-verify", cmd_ck_verify},
        {"mollifier-check", cmd_mollifier_check}, {"scan", cmd_scan},
        {"knapp", cmd_knapp},                 {"square-function", cmd_square_function},
        {"lebesgue", cmd_lebesgue},           {"squared-trick", cmd_squared_trick}};
    return table.at(c.command)(c);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("out-dir", "cannot write " + path.string());
    os << content;
}

}  // namespace

void RunConfig::validate() const {
    auto require = [](bool ok, const char* field, const std::string& msg) {
        if (!ok) throw ConfigError(field, msg);
    };
    std::set<std::string> names;
    for (const auto& cmd : commands()) names.insert(cmd.name);
    require(names.count(command) == 1, "command", "unknown subcommand '" + command + "'");
    require(d >= 1 && d <= 6, "d", "must lie in [1, 6]");
    require(p >= 1.0 && p <= 2.0, "p", "must lie in [1, 2]");
    require(q > 1.0 && std::isfinite(q), "q", "must lie in (1, infinity)");
    require(rho >= 1.0 && std::isfinite(rho), "rho", "must be finite and >= 1");
    require(measure == "gaussian" || measure == "ball" || measure == "sphere" || measure == "point", "measure",
            "must be one of gaussian, ball, sphere, point");
    require(surface == "sphere" || surface == "paraboloid" || surface == "cone", "surface",
            "must be one of sphere, paraboloid, cone");
    require(radius > 0.0 && std::isfinite(radius), "radius", "must be positive");
    require(inner > 0.0 && outer > inner && std::isfinite(outer), "inner", "need 0 < inner < outer");
    require(resolution >= 2 && resolution <= 512, "resolution", "must lie in [2, 512]");
    require(points_per_octave >= 1 && points_per_octave <= 256, "points-per-octave", "must lie in [1, 256]");
    require(k_min <= 0 && k_max >= 0 && k_min < k_max && k_min >= -30 && k_max <= 30, "k-min",
            "need -30 <= k-min <= 0 <= k-max <= 30 with k-min < k-max");
    require(instances >= 1 && instances <= 1000000, "instances", "must lie in [1, 10^6]");
    require(max_blocks >= 1 && max_blocks <= 16, "max-blocks", "must lie in [1, 16]");
    require(max_lattice >= max_blocks && max_lattice <= 4096, "max-lattice", "must lie in [max-blocks, 4096]");
    require(max_atoms >= 1 && max_atoms <= 4096, "max-atoms", "must lie in [1, 4096]");
    require(cases >= 1, "cases", "must be positive");
    require(max_len >= 2 && max_len <= 14, "max-len", "must lie in [2, 14]");
    require(alpha_max >= 0.0 && alpha_max <= specfun::kMaxBesselOrder, "alpha-max", "must lie in [0, 10]");
    require(z_max > 0.0 && std::isfinite(z_max), "z-max", "must be positive");
    require(z_points >= 2, "z-points", "must be >= 2");
    require(r_min > 0.0 && r_max > r_min && std::isfinite(r_max), "r-min", "need 0 < r-min < r-max");
    require(samples >= 50, "samples", "must be >= 50");
    require(order >= 2, "order", "must be >= 2");
    require(delta_exp_min >= 2 && delta_exp_max <= 20 && delta_exp_max - delta_exp_min >= 5, "delta-exp-min",
            "need 2 <= delta-exp-min, delta-exp-max <= 20 and at least six deltas");
    require(eps_min > 0.0 && eps_max <= 1.0 && eps_min < eps_max, "eps-min", "need 0 < eps-min < eps-max <= 1");
    require(eps_points >= 2, "eps-points", "must be >= 2");
    require(!out_dir.empty(), "out-dir", "must not be empty");
}

void RunConfig::apply_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");
    auto table = fields(*this);
    for (const auto& [key, value] : j.items()) {
        if (key == "command") {
            if (!value.is_string() || value.get<std::string>() != command) {
                throw ConfigError("command", "config names a different subcommand");
            }
            continue;
        }
        auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.first == key; });
        if (it == table.end()) throw ConfigError(key, "unknown configuration key");
        std::visit(
            [&, k = key](auto* ptr) {
                using T = std::remove_pointer_t<decltype(ptr)>;
                if constexpr (std::is_same_v<T, std::string>) {
                    if (!value.is_string()) throw ConfigError(k, "expected a string");
                } else if constexpr (std::is_same_v<T, double>) {
                    if (!value.is_number()) throw ConfigError(k, "expected a number");
                } else if constexpr (std::is_same_v<T, std::uint64_t>) {
                    if (!value.is_number_unsigned()) throw ConfigError(k, "expected a nonnegative integer");
                } else {
                    if (!value.is_number_integer()) throw ConfigError(k, "expected an integer");
                }
                *ptr = value.get<T>();
            },
            it->second);
    }
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    for (const auto& [key, ref] : fields(const_cast<RunConfig&>(*this))) {
        std::visit([&, k = key](auto* ptr) { j[k] = *ptr; }, ref);
    }
    return j;
}

int run(int argc, const char* const* argv) {
    CLI::App app{"Maximal and variational Fourier restriction experiments", "restrictlab"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    RunConfig cfg;
    std::string config_path;
    auto table = fields(cfg);
    for (const auto& cmd : commands()) {
        auto* sub = app.add_subcommand(cmd.name, cmd.help);
        sub->add_option("--config", config_path, "JSON file whose keys override the flags");
        std::vector<std::string> opts = {"seed", "out-dir"};
        opts.insert(opts.end(), cmd.options.begin(), cmd.options.end());
        for (const auto& name : opts) {
            auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.first == name; });
            std::visit([&](auto* ptr) { sub->add_option("--" + name, *ptr)->capture_default_str(); }, it->second);
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw ConfigError("config", "cannot open " + config_path);
            nlohmann::json j;
            try {
                is >> j;
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError("config", std::string("invalid JSON: ") + e.what());
            }
            cfg.apply_json(j);
        }
        cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    Outcome outcome;
    try {
        outcome = dispatch(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const nlohmann::json config_json = cfg.to_json();
    try {
        const std::filesystem::path dir(cfg.out_dir);
        std::filesystem::create_directories(dir);
        nlohmann::json doc = {{"config", config_json}, {"result", outcome.summary}};
        write_file(dir / (cfg.command + ".json"), doc.dump(2) + "\n");
        if (!outcome.csv.empty()) {
            write_file(dir / (cfg.command + ".csv"), "# config: " + config_json.dump() + "\n" + outcome.csv);
        }
        if (!outcome.ok && !outcome.failure.empty()) {
            write_file(dir / (cfg.command + "-failure.json"), outcome.failure + "\n");
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    std::cout << nlohmann::json(outcome.summary.is_object() && outcome.summary.contains("reports")
                                    ? nlohmann::json{{"instances", outcome.summary["instances"]},
                                                     {"passing", outcome.summary["passing"]},
                                                     {"pass", outcome.summary["pass"]}}
                                    : outcome.summary)
                     .dump(2)
              << "\n";
    if (!outcome.ok) {
        std::cerr << "assertion failure; reproducer written to " << cfg.out_dir << "/" << cfg.command
                  << "-failure.json\n";
        return 1;
    }
    return 0;
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("restrictlab");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace restrictlab::cli
