#include "restrictlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "restrictlab/errors.hpp"
#include "restrictlab/numerics.hpp"

namespace restrictlab::oracle {

DiscreteRestrictionModel::DiscreteRestrictionModel(std::vector<Eigen::VectorXd> pts, surfaces::FiniteAtomic at,
                                                   double p_, double q_)
    : lattice(std::move(pts)), atoms(std::move(at)), p(p_), q(q_) {
    if (lattice.empty() || atoms.atoms.empty()) throw ShapeError("DiscreteRestrictionModel: empty lattice or atom set");
    const auto d = lattice.front().size();
    for (const auto& x : lattice) {
        if (x.size() != d) throw ShapeError("DiscreteRestrictionModel: lattice points differ in dimension");
    }
    for (const auto& a : atoms.atoms) {
        if (a.point.size() != d) throw ShapeError("DiscreteRestrictionModel: atom dimension differs from lattice");
        if (!(a.weight > 0.0) || std::isinf(a.weight)) throw DomainError("DiscreteRestrictionModel: atom weights must be positive");
    }
    if (!(p >= 1.0 && p <= 2.0)) throw DomainError("DiscreteRestrictionModel: p must lie in [1, 2]");
    if (!(q > 1.0) || std::isinf(q)) throw DomainError("DiscreteRestrictionModel: q must lie in (1, infinity)");
}

surfaces::SurfaceQuadrature DiscreteRestrictionModel::atom_quadrature() const {
    return surfaces::quadrature(atoms, 2);
}

std::vector<Complex> dft_restriction(const std::vector<Complex>& g, const DiscreteRestrictionModel& model) {
    if (g.size() != model.lattice.size()) throw ShapeError("dft_restriction: values not aligned with lattice");
    std::vector<Complex> out;
    out.reserve(model.atoms.atoms.size());
    for (const auto& atom : model.atoms.atoms) {
        Complex sum = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (g[j] == 0.0) continue;
            const double phase = -2.0 * M_PI * model.lattice[j].dot(atom.point);
            sum += g[j] * Complex(std::cos(phase), std::sin(phase));
        }
        out.push_back(sum);
    }
    return out;
}

double exact_c_restr(const DiscreteRestrictionModel& model) {
    if (model.p != 1.0) throw DomainError("exact_c_restr: certified constant exists only for p = 1");
    double total = 0.0;
    for (const auto& a : model.atoms.atoms) total += a.weight;
    return std::pow(total, 1.0 / model.q);
}

double lp_counting(const std::vector<Complex>& g, double p) {
    double sum = 0.0;
    for (const auto& v : g) sum += std::pow(std::abs(v), p);
    return std::pow(sum, 1.0 / p);
}

std::vector<Complex> RestrictionInstance::block_function(int k) const {
    std::vector<Complex> out(f.size(), 0.0);
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (block_of[j] == k) out[j] = f[j];
    }
    return out;
}

double RestrictionInstance::block_mass(int k) const {
    double m = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (block_of[j] == k) m += std::pow(std::abs(f[j]), model.p);
    }
    return m;
}

RestrictionInstance random_instance(std::uint64_t seed, const InstanceParams& params) {
    if (params.max_blocks < 1 || params.max_blocks > 16) throw DomainError("random_instance: block count must lie in [1, 16]");
    if (params.max_lattice < params.max_blocks || params.max_lattice > 4096) {
        throw DomainError("random_instance: lattice size must lie in [blocks, 4096]");
    }
    if (params.d < 1 || params.d > 4) throw DomainError("random_instance: dimension must lie in [1, 4]");
    if (params.max_atoms < 1) throw DomainError("random_instance: need at least one atom");

    numerics::Rng rng(seed);
    const int blocks = static_cast<int>(rng.integer(1, params.max_blocks));
    const int n = static_cast<int>(rng.integer(blocks, params.max_lattice));
    const int n_atoms = static_cast<int>(rng.integer(1, params.max_atoms));

    // First n points of the cubic grid of side ceil(n^(1/d)), spacing h.
    const double h = rng.uniform(0.05, 0.5);
    int side = 1;
    while (std::pow(side, params.d) < n) ++side;
    std::vector<Eigen::VectorXd> lattice;
    lattice.reserve(n);
    for (int idx = 0; idx < n; ++idx) {
        Eigen::VectorXd x(params.d);
        int rem = idx;
        for (int c = 0; c < params.d; ++c) {
            x[c] = h * (rem % side - 0.5 * (side - 1));
            rem /= side;
        }
        lattice.push_back(std::move(x));
    }

    surfaces::FiniteAtomic atoms;
    for (int i = 0; i < n_atoms; ++i) {
        Eigen::VectorXd xi(params.d);
        for (int c = 0; c < params.d; ++c) xi[c] = rng.uniform(-2.0, 2.0);
        atoms.atoms.push_back({xi, rng.uniform(0.1, 1.0)});
    }

    // Blocks: a seeded shuffle cut at blocks-1 distinct interior positions.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.integer(0, i)]);
    std::vector<int> cuts;
    while (static_cast<int>(cuts.size()) < blocks - 1) {
        const int c = static_cast<int>(rng.integer(1, n - 1));
        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(n);
    std::vector<int> block_of(n);
    int b = 0;
    for (int pos = 0; pos < n; ++pos) {
        while (pos >= cuts[b]) ++b;
        block_of[order[pos]] = b;
    }

    std::vector<Complex> f(n);
    for (auto& v : f) v = std::polar(rng.uniform(), 2.0 * M_PI * rng.uniform());

    return RestrictionInstance{seed, DiscreteRestrictionModel(std::move(lattice), std::move(atoms), params.p, params.q),
                               std::move(f), std::move(block_of), blocks};
}

nlohmann::json to_json(const RestrictionInstance& in) {
    nlohmann::json j;
    j["seed"] = in.seed;
    j["p"] = in.model.p;
    j["q"] = in.model.q;
    j["blocks"] = in.blocks;
    auto& lat = j["lattice"] = nlohmann::json::array();
    for (const auto& x : in.model.lattice) lat.push_back(std::vector<double>(x.data(), x.data() + x.size()));
    auto& at = j["atoms"] = nlohmann::json::array();
    for (const auto& a : in.model.atoms.atoms) {
        at.push_back({{"point", std::vector<double>(a.point.data(), a.point.data() + a.point.size())},
                      {"weight", a.weight}});
    }
    auto& fv = j["f"] = nlohmann::json::array();
    for (const auto& v : in.f) fv.push_back({v.real(), v.imag()});
    j["block_of"] = in.block_of;
    return j;
}

RestrictionInstance instance_from_json(const nlohmann::json& j) {
    std::vector<Eigen::VectorXd> lattice;
    for (const auto& x : j.at("lattice")) {
        const auto v = x.get<std::vector<double>>();
        lattice.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    surfaces::FiniteAtomic atoms;
    for (const auto& a : j.at("atoms")) {
        const auto v = a.at("point").get<std::vector<double>>();
        atoms.atoms.push_back(
            {Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())), a.at("weight").get<double>()});
    }
    std::vector<Complex> f;
    for (const auto& v : j.at("f")) f.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    auto block_of = j.at("block_of").get<std::vector<int>>();
    const int blocks = j.at("blocks").get<int>();
    if (f.size() != lattice.size() || block_of.size() != lattice.size()) {
        throw ShapeError("instance_from_json: arrays differ in length");
    }
    for (int b : block_of) {
        if (b < 0 || b >= blocks) throw ShapeError("instance_from_json: block index out of range");
    }
    return RestrictionInstance{j.at("seed").get<std::uint64_t>(),
                               DiscreteRestrictionModel(std::move(lattice), std::move(atoms), j.at("p").get<double>(),
                                                        j.at("q").get<double>()),
                               std::move(f), std::move(block_of), blocks};
}

}  // namespace restrictlab::oracle
