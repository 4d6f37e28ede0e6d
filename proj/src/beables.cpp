#include "ontolab/beables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ontolab {

namespace {

bool exactly_diagonal(const CMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (i != j && m(i, j) != Amplitude(0.0, 0.0)) return false;
    return true;
}

// sigma^t with accumulated phases; t may be negative.
struct IndexPower {
    std::vector<std::size_t> map;
    std::vector<double> phase;
};

IndexPower index_power(const GeneralizedPermutation& p, std::int64_t t) {
    std::optional<GeneralizedPermutation> inv;
    if (t < 0) inv = p.inverse();
    const GeneralizedPermutation& stepper = t < 0 ? *inv : p;
    const std::uint64_t count = static_cast<std::uint64_t>(t >= 0 ? t : -t);
    IndexPower out;
    out.map.resize(p.dim());
    out.phase.assign(p.dim(), 0.0);
    for (std::size_t i = 0; i < p.dim(); ++i) out.map[i] = i;
    for (std::uint64_t s = 0; s < count; ++s) {
        for (std::size_t i = 0; i < p.dim(); ++i) {
            out.phase[i] += stepper.phase(out.map[i]);
            out.map[i] = stepper.target(out.map[i]);
        }
    }
    return out;
}

CMatrix conjugate_by_index_power(const CMatrix& a, const IndexPower& w, bool pure) {
    const auto n = a.rows();
    CMatrix out(n, n);
    if (pure) {
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                out(i, j) = a(static_cast<Eigen::Index>(w.map[static_cast<std::size_t>(i)]),
                              static_cast<Eigen::Index>(w.map[static_cast<std::size_t>(j)]));
    } else {
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                out(i, j) = std::polar(1.0, w.phase[static_cast<std::size_t>(j)] -
                                                w.phase[static_cast<std::size_t>(i)]) *
                            a(static_cast<Eigen::Index>(w.map[static_cast<std::size_t>(i)]),
                              static_cast<Eigen::Index>(w.map[static_cast<std::size_t>(j)]));
    }
    return out;
}

}  // namespace

Observable::Observable(CMatrix m, std::string lbl) : entries(std::move(m)), label(std::move(lbl)) {
    if (entries.rows() == 0 || entries.rows() != entries.cols())
        throw std::domain_error("Observable: square nonempty matrix required");
    const double defect = (entries - entries.adjoint().eval()).cwiseAbs().maxCoeff();
    if (!(defect <= kHermiticityTol))
        throw std::domain_error("Observable '" + label + "': not Hermitian (defect " +
                                std::to_string(defect) + ")");
}

Observable x_at(std::size_t site, std::size_t sites) {
    if (sites == 0 || sites > 12) throw std::length_error("x_at: sites must lie in [1, 12]");
    if (site >= sites) throw std::domain_error("x_at: site out of range");
    const std::size_t dim = std::size_t{1} << sites;
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t s = 0; s < dim; ++s)
        m(static_cast<Eigen::Index>(s ^ (std::size_t{1} << site)), static_cast<Eigen::Index>(s)) = 1.0;
    return Observable(std::move(m), "X@site" + std::to_string(site));
}

Observable z_at(std::size_t site, std::size_t sites) {
    if (sites == 0 || sites > 12) throw std::length_error("z_at: sites must lie in [1, 12]");
    if (site >= sites) throw std::domain_error("z_at: site out of range");
    const std::size_t dim = std::size_t{1} << sites;
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t s = 0; s < dim; ++s)
        m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) =
            ((s >> site) & 1u) ? -1.0 : 1.0;
    return Observable(std::move(m), "Z@site" + std::to_string(site));
}

std::vector<Observable> basis_projectors(std::size_t dim) {
    if (dim == 0) throw std::domain_error("basis_projectors: dim must be positive");
    std::vector<Observable> out;
    out.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        out.emplace_back(std::move(m), "P" + std::to_string(i));
    }
    return out;
}

SiteGeometry::SiteGeometry(std::size_t sites_, std::size_t speed_, int drift_)
    : sites(sites_), speed(speed_), drift(drift_) {
    if (sites < 2) throw std::domain_error("SiteGeometry: at least two sites required");
    if (speed == 0) throw std::domain_error("SiteGeometry: speed must be positive");
    if (drift != 1 && drift != -1) throw std::domain_error("SiteGeometry: drift must be +1 or -1");
}

std::size_t SiteGeometry::distance(std::size_t x, std::size_t xp) const {
    if (x >= sites || xp >= sites) throw std::domain_error("SiteGeometry: site out of range");
    const std::size_t dx = x > xp ? x - xp : xp - x;
    return std::min(dx, sites - dx);
}

Observable heisenberg(const Observable& a, const UnitaryMatrix& u, std::int64_t t) {
    if (a.dim() != u.dim()) throw std::invalid_argument("heisenberg: dimension mismatch");
    if (const auto p = as_generalized_permutation(u.entries())) return heisenberg(a, *p, t);
    const std::uint64_t count = static_cast<std::uint64_t>(t >= 0 ? t : -t);
    CMatrix power = CMatrix::Identity(static_cast<Eigen::Index>(u.dim()), static_cast<Eigen::Index>(u.dim()));
    for (std::uint64_t s = 0; s < count; ++s) power = (power * u.entries()).eval();
    if (t < 0) power = power.adjoint().eval();
    CMatrix m = power.adjoint() * a.entries * power;
    m = (0.5 * (m + m.adjoint().eval())).eval();  // the exact result is Hermitian
    return Observable(std::move(m), a.label);
}

Observable heisenberg(const Observable& a, const GeneralizedPermutation& p, std::int64_t t) {
    if (a.dim() != p.dim()) throw std::invalid_argument("heisenberg: dimension mismatch");
    const IndexPower w = index_power(p, t);
    const bool pure = p.is_pure();
    return Observable(conjugate_by_index_power(a.entries, w, pure), a.label);
}

double commutator_norm(const Observable& a, const Observable& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("commutator_norm: dimension mismatch");
    const bool da = exactly_diagonal(a.entries);
    const bool db = exactly_diagonal(b.entries);
    if (da && db) return 0.0;  // diagonal matrices commute identically
    if (da || db) {
        const CMatrix& diag = da ? a.entries : b.entries;
        const CMatrix& dense = da ? b.entries : a.entries;
        double worst = 0.0;
        for (Eigen::Index j = 0; j < dense.cols(); ++j)
            for (Eigen::Index i = 0; i < dense.rows(); ++i)
                worst = std::max(worst, std::abs((diag(i, i) - diag(j, j)) * dense(i, j)));
        return worst;
    }
    return (a.entries * b.entries - b.entries * a.entries).cwiseAbs().maxCoeff();
}

std::uint64_t default_horizon(const GeneralizedPermutation& p) {
    try {
        const std::uint64_t n = period(p);
        return n <= 64 ? n : 64;
    } catch (const std::overflow_error&) {
        return 64;
    }
}

namespace {

// Scan order for the permutation path: pairs (i<=j) lexicographic, time
// difference 0, +1, -1, +2, -2, ... so the reported witness is the first
// violation in a documented deterministic order.
std::int64_t delta_at(std::size_t rank) {
    if (rank == 0) return 0;
    const std::int64_t k = static_cast<std::int64_t>((rank + 1) / 2);
    return (rank % 2 == 1) ? k : -k;
}

}  // namespace

BeableVerdict is_beable_set(const std::vector<Observable>& ops, const GeneralizedPermutation& p,
                            std::uint64_t horizon, double tol, Exec exec) {
    if (ops.empty()) return BeableVerdict{true, std::nullopt};
    for (const auto& op : ops)
        if (op.dim() != p.dim()) throw std::invalid_argument("is_beable_set: dimension mismatch");

    const std::size_t n_ops = ops.size();
    const std::size_t n_pairs = n_ops * (n_ops + 1) / 2;
    const std::size_t n_delta = 2 * static_cast<std::size_t>(horizon) + 1;
    const std::size_t cells = n_pairs * n_delta;

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n_pairs);
    for (std::size_t i = 0; i < n_ops; ++i)
        for (std::size_t j = i; j < n_ops; ++j) pairs.emplace_back(i, j);

    std::vector<double> norms(cells, 0.0);
    for_each_index(cells, exec, [&](std::size_t cell) {
        const auto [i, j] = pairs[cell / n_delta];
        const std::int64_t delta = delta_at(cell % n_delta);
        // |[A_i(s), A_j(t)]| depends only on t-s under permutation
        // conjugation (entry moduli are preserved).
        const Observable bj = heisenberg(ops[j], p, delta);
        norms[cell] = commutator_norm(ops[i], bj);
    });

    for (std::size_t cell = 0; cell < cells; ++cell) {
        if (norms[cell] > tol) {
            const auto [i, j] = pairs[cell / n_delta];
            const std::int64_t delta = delta_at(cell % n_delta);
            BeableWitness w;
            w.i = i;
            w.j = j;
            w.s = delta >= 0 ? 0 : -delta;
            w.t = delta >= 0 ? delta : 0;
            w.commutator = norms[cell];
            return BeableVerdict{false, w};
        }
    }
    return BeableVerdict{true, std::nullopt};
}

BeableVerdict is_beable_set(const std::vector<Observable>& ops, const UnitaryMatrix& u,
                            std::uint64_t horizon, double tol, Exec exec) {
    if (const auto p = as_generalized_permutation(u.entries()))
        return is_beable_set(ops, *p, horizon, tol, exec);

    if (ops.empty()) return BeableVerdict{true, std::nullopt};
    for (const auto& op : ops)
        if (op.dim() != u.dim()) throw std::invalid_argument("is_beable_set: dimension mismatch");

    // Generic unitary: evolve each observable incrementally and scan the
    // full (s, t) grid in lexicographic order.
    const std::size_t n_ops = ops.size();
    const std::size_t times = static_cast<std::size_t>(horizon) + 1;
    std::vector<std::vector<Observable>> evolved;
    evolved.reserve(n_ops);
    for (const auto& op : ops) {
        std::vector<Observable> row;
        row.reserve(times);
        row.push_back(op);
        for (std::size_t t = 1; t < times; ++t) {
            CMatrix m = u.entries().adjoint() * row.back().entries * u.entries();
            m = (0.5 * (m + m.adjoint().eval())).eval();
            row.emplace_back(std::move(m), op.label);
        }
        evolved.push_back(std::move(row));
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n_ops; ++i)
        for (std::size_t j = i; j < n_ops; ++j) pairs.emplace_back(i, j);
    const std::size_t cells = pairs.size() * times * times;

    std::vector<double> norms(cells, 0.0);
    for_each_index(cells, exec, [&](std::size_t cell) {
        const auto [i, j] = pairs[cell / (times * times)];
        const std::size_t s = (cell / times) % times;
        const std::size_t t = cell % times;
        norms[cell] = commutator_norm(evolved[i][s], evolved[j][t]);
    });
    for (std::size_t cell = 0; cell < cells; ++cell) {
        if (norms[cell] > tol) {
            const auto [i, j] = pairs[cell / (times * times)];
            BeableWitness w;
            w.i = i;
            w.j = j;
            w.s = static_cast<std::int64_t>((cell / times) % times);
            w.t = static_cast<std::int64_t>(cell % times);
            w.commutator = norms[cell];
            return BeableVerdict{false, w};
        }
    }
    return BeableVerdict{true, std::nullopt};
}

const char* to_string(Separation s) {
    switch (s) {
        case Separation::spacelike: return "spacelike";
        case Separation::lightlike: return "lightlike";
        case Separation::timelike: return "timelike";
    }
    return "unknown";
}

namespace {

Separation classify(const SiteGeometry& g, std::size_t x, std::int64_t t, std::size_t xp, std::int64_t tp) {
    const auto d = static_cast<std::int64_t>(g.distance(x, xp));
    const std::int64_t reach = static_cast<std::int64_t>(g.speed) * std::llabs(t - tp);
    if (d > reach) return Separation::spacelike;
    if (d == reach) return Separation::lightlike;
    return Separation::timelike;
}

bool on_characteristic(const SiteGeometry& g, std::size_t x, std::int64_t t, std::size_t xp,
                       std::int64_t tp) {
    // Equal co-moving labels (x - drift*speed*t) mod sites.
    const auto l = static_cast<std::int64_t>(g.sites);
    std::int64_t lhs = (static_cast<std::int64_t>(x) - g.drift * static_cast<std::int64_t>(g.speed) * t) % l;
    std::int64_t rhs = (static_cast<std::int64_t>(xp) - g.drift * static_cast<std::int64_t>(g.speed) * tp) % l;
    if (lhs < 0) lhs += l;
    if (rhs < 0) rhs += l;
    return lhs == rhs;
}

}  // namespace

ConeResult light_cone_check(const SiteGeometry& g, const UnitaryMatrix& u, const Observable& a,
                            std::size_t x, std::int64_t t, const Observable& b, std::size_t xp,
                            std::int64_t tp) {
    if (x >= g.sites || xp >= g.sites) throw std::domain_error("light_cone_check: site out of range");
    ConeResult r;
    r.separation = classify(g, x, t, xp, tp);
    r.causal_contact = on_characteristic(g, x, t, xp, tp);
    const Observable at = heisenberg(a, u, t);
    const Observable btp = heisenberg(b, u, tp);
    r.commutator = commutator_norm(at, btp);
    return r;
}

std::vector<ConeMapRow> cone_map(std::size_t sites, std::int64_t t_max, Exec exec) {
    if (sites < 2 || sites > 12) throw std::length_error("cone_map: sites must lie in [2, 12]");
    if (t_max < 0) throw std::domain_error("cone_map: t_max must be nonnegative");
    const GeneralizedPermutation p = bit_shift_universe(sites);
    const SiteGeometry g(sites, 1, +1);
    const std::size_t times = static_cast<std::size_t>(t_max) + 1;

    // Evolved probes, indexed [site][kind][time]; kind 0 = X, 1 = Z.
    std::vector<std::vector<std::vector<Observable>>> probes(sites);
    for (std::size_t s = 0; s < sites; ++s) {
        probes[s].resize(2);
        const Observable xo = x_at(s, sites);
        const Observable zo = z_at(s, sites);
        for (std::size_t t = 0; t < times; ++t) {
            probes[s][0].push_back(heisenberg(xo, p, static_cast<std::int64_t>(t)));
            probes[s][1].push_back(heisenberg(zo, p, static_cast<std::int64_t>(t)));
        }
    }

    const std::size_t rows = sites * sites * times * times * 4;
    std::vector<ConeMapRow> out(rows);
    for_each_index(rows, exec, [&](std::size_t idx) {
        std::size_t rest = idx;
        const std::size_t pb = rest % 2; rest /= 2;
        const std::size_t pa = rest % 2; rest /= 2;
        const std::size_t tp = rest % times; rest /= times;
        const std::size_t t = rest % times; rest /= times;
        const std::size_t xp = rest % sites; rest /= sites;
        const std::size_t x = rest;
        ConeMapRow& row = out[idx];
        row.x = x;
        row.xp = xp;
        row.t = static_cast<std::int64_t>(t);
        row.tp = static_cast<std::int64_t>(tp);
        row.probe_a = pa == 0 ? "X" : "Z";
        row.probe_b = pb == 0 ? "X" : "Z";
        row.separation = classify(g, x, row.t, xp, row.tp);
        row.causal_contact = on_characteristic(g, x, row.t, xp, row.tp);
        row.commutator = commutator_norm(probes[x][pa][t], probes[xp][pb][tp]);
    });
    return out;
}

}  // namespace ontolab
