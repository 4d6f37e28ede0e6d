#include "ontolab/evolution.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace ontolab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t lcm_checked(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t g = std::gcd(a, b);
    const std::uint64_t q = a / g;
    if (b != 0 && q > UINT64_MAX / b)
        throw std::overflow_error("period: lcm of cycle lengths exceeds 64 bits");
    return q * b;
}

}  // namespace

TimeStep::TimeStep(double value) : dt(value) {
    if (!(std::isfinite(value) && value > 0.0)) throw std::domain_error("TimeStep: dt must be positive");
}

double to_branch(double angle, Branch branch) {
    double y = std::fmod(angle, kTwoPi);
    if (branch == Branch::zero_to_two_pi) {
        if (y < 0.0) y += kTwoPi;
        if (y >= kTwoPi) y = 0.0;
    } else {
        if (y > kPi) y -= kTwoPi;
        if (y <= -kPi) y += kTwoPi;
    }
    return y + 0.0;  // normalize -0.0
}

GeneralizedPermutation::GeneralizedPermutation(std::vector<std::size_t> target, std::vector<double> phase)
    : target_(std::move(target)), phase_(std::move(phase)) {
    const std::size_t n = target_.size();
    if (n == 0) throw std::domain_error("GeneralizedPermutation: dimension must be positive");
    if (phase_.size() != n) throw std::domain_error("GeneralizedPermutation: phase length mismatch");
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (target_[i] >= n) throw std::domain_error("GeneralizedPermutation: target index out of range");
        if (seen[target_[i]]) throw std::domain_error("GeneralizedPermutation: target is not a bijection");
        seen[target_[i]] = true;
    }
    for (double ph : phase_)
        if (!std::isfinite(ph)) throw std::domain_error("GeneralizedPermutation: non-finite phase");
}

GeneralizedPermutation GeneralizedPermutation::pure(std::vector<std::size_t> target) {
    std::vector<double> zero(target.size(), 0.0);
    return GeneralizedPermutation(std::move(target), std::move(zero));
}

GeneralizedPermutation GeneralizedPermutation::identity(std::size_t dim) {
    std::vector<std::size_t> t(dim);
    for (std::size_t i = 0; i < dim; ++i) t[i] = i;
    return pure(std::move(t));
}

bool GeneralizedPermutation::is_pure() const {
    for (double ph : phase_)
        if (ph != 0.0) return false;
    return true;
}

bool GeneralizedPermutation::is_identity() const {
    if (!is_pure()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
        if (target_[i] != i) return false;
    return true;
}

GeneralizedPermutation GeneralizedPermutation::inverse() const {
    // Inverse carries phase -phase(i) at the image index: column target(i)
    // of the inverse has its nonzero e^{-i phase(i)} at row i.
    std::vector<std::size_t> t(dim());
    std::vector<double> ph(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        t[target_[i]] = i;
        ph[target_[i]] = -phase_[i];
    }
    return GeneralizedPermutation(std::move(t), std::move(ph));
}

std::vector<std::vector<std::size_t>> GeneralizedPermutation::cycles() const {
    std::vector<std::vector<std::size_t>> out;
    std::vector<bool> seen(dim(), false);
    for (std::size_t start = 0; start < dim(); ++start) {
        if (seen[start]) continue;
        std::vector<std::size_t> cyc;
        std::size_t j = start;
        while (!seen[j]) {
            seen[j] = true;
            cyc.push_back(j);
            j = target_[j];
        }
        out.push_back(std::move(cyc));
    }
    return out;
}

UpdateRuleResult from_update_rule(const std::vector<std::size_t>& table) {
    const std::size_t n = table.size();
    if (n == 0) throw std::domain_error("from_update_rule: empty table");
    std::vector<std::size_t> preimage(n, n);  // n = unset
    for (std::size_t i = 0; i < n; ++i) {
        if (table[i] >= n) throw std::domain_error("from_update_rule: index out of range");
        if (preimage[table[i]] != n) return NotInvertible{preimage[table[i]], i, table[i]};
        preimage[table[i]] = i;
    }
    return GeneralizedPermutation::pure(table);
}

GeneralizedPermutation cogwheel(std::size_t n) {
    if (n == 0) throw std::domain_error("cogwheel: N must be positive");
    std::vector<std::size_t> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = (i + 1) % n;
    return GeneralizedPermutation::pure(std::move(t));
}

GeneralizedPermutation bit_shift_universe(std::size_t sites) {
    if (sites == 0) throw std::domain_error("bit_shift_universe: sites must be positive");
    if (sites > 12) throw std::length_error("bit_shift_universe: sites > 12 (dim 2^sites exceeds the supported 4096)");
    const std::size_t dim = std::size_t{1} << sites;
    const std::size_t mask = dim - 1;
    std::vector<std::size_t> t(dim);
    for (std::size_t s = 0; s < dim; ++s)
        t[s] = ((s << 1) | (s >> (sites - 1))) & mask;
    return GeneralizedPermutation::pure(std::move(t));
}

std::uint64_t period(const GeneralizedPermutation& p) {
    if (!p.is_pure())
        throw std::domain_error("period: phased permutations unsupported (phase rotations may be aperiodic)");
    std::uint64_t result = 1;
    for (const auto& cyc : p.cycles()) result = lcm_checked(result, cyc.size());
    return result;
}

UnitaryMatrix to_matrix(const GeneralizedPermutation& p) {
    const auto n = static_cast<Eigen::Index>(p.dim());
    CMatrix m = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < p.dim(); ++i)
        m(static_cast<Eigen::Index>(p.target(i)), static_cast<Eigen::Index>(i)) =
            std::polar(1.0, p.phase(i));
    return UnitaryMatrix(std::move(m));
}

UnitaryMatrix UnitaryMatrix::from_dense(CMatrix entries) {
    if (entries.rows() == 0 || entries.rows() != entries.cols())
        throw std::domain_error("UnitaryMatrix: square nonempty matrix required");
    const double defect = unitarity_defect(entries);
    if (!(defect <= kUnitarityTol))
        throw std::domain_error("UnitaryMatrix: unitarity defect " + std::to_string(defect) +
                                " exceeds tolerance");
    return UnitaryMatrix(std::move(entries));
}

std::optional<GeneralizedPermutation> as_generalized_permutation(const CMatrix& u, double tol) {
    const auto n = u.rows();
    if (n == 0 || n != u.cols()) return std::nullopt;
    std::vector<std::size_t> target(static_cast<std::size_t>(n));
    std::vector<double> phase(static_cast<std::size_t>(n));
    std::vector<bool> row_used(static_cast<std::size_t>(n), false);
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Index row = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mag = std::abs(u(i, j));
            if (mag > tol) {
                if (row >= 0) return std::nullopt;  // second nonzero in this column
                if (std::abs(mag - 1.0) > tol) return std::nullopt;
                row = i;
            }
        }
        if (row < 0 || row_used[static_cast<std::size_t>(row)]) return std::nullopt;
        row_used[static_cast<std::size_t>(row)] = true;
        target[static_cast<std::size_t>(j)] = static_cast<std::size_t>(row);
        const double arg = std::arg(u(row, j));
        phase[static_cast<std::size_t>(j)] = (arg == 0.0 || std::abs(arg) > tol) ? arg : 0.0;
    }
    return GeneralizedPermutation(std::move(target), std::move(phase));
}

StateVector evolve(const StateVector& psi, const GeneralizedPermutation& p, std::uint64_t steps) {
    if (psi.dim() != p.dim()) throw std::invalid_argument("evolve: dimension mismatch");
    std::vector<Amplitude> cur = psi.amplitudes();
    std::vector<Amplitude> next(cur.size());
    if (p.is_pure()) {
        for (std::uint64_t s = 0; s < steps; ++s) {
            for (std::size_t i = 0; i < cur.size(); ++i) next[p.target(i)] = cur[i];
            cur.swap(next);
        }
    } else {
        std::vector<Amplitude> factor(cur.size());
        for (std::size_t i = 0; i < cur.size(); ++i) factor[i] = std::polar(1.0, p.phase(i));
        for (std::uint64_t s = 0; s < steps; ++s) {
            for (std::size_t i = 0; i < cur.size(); ++i) next[p.target(i)] = factor[i] * cur[i];
            cur.swap(next);
        }
    }
    return StateVector(std::move(cur));
}

std::size_t evolve_index(const GeneralizedPermutation& p, std::size_t index, std::uint64_t steps) {
    if (index >= p.dim()) throw std::invalid_argument("evolve_index: index out of range");
    // Reduce steps modulo the cycle length containing the index.
    std::vector<std::size_t> cyc;
    std::size_t j = index;
    do {
        cyc.push_back(j);
        j = p.target(j);
    } while (j != index);
    return cyc[steps % cyc.size()];
}

std::vector<double> Spectrum::sorted_eigenphases() const {
    std::vector<double> s = eigenphases;
    std::sort(s.begin(), s.end());
    return s;
}

Spectrum spectrum(const UnitaryMatrix& u, Branch branch) {
    // A unitary is normal: its Hermitian part K and skew part S commute and
    // share an eigenbasis. Diagonalize K, then rotate inside each
    // near-degenerate K-cluster (gap < 1e-8) to diagonalize the projected S.
    // This keeps the eigenvector matrix orthonormal for any degeneracy
    // pattern, where a generic Schur/eigensolver route does not.
    const auto n = u.entries().rows();
    const CMatrix herm = 0.5 * (u.entries() + u.entries().adjoint());
    const CMatrix skew = Amplitude(0.0, -0.5) * (u.entries() - u.entries().adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failure");
    CMatrix v = es.eigenvectors();
    const Eigen::VectorXd kvals = es.eigenvalues();

    constexpr double kClusterGap = 1e-8;
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && kvals(end) - kvals(end - 1) < kClusterGap) ++end;
        if (end - start > 1) {
            const CMatrix block = v.middleCols(start, end - start);
            CMatrix m = block.adjoint() * skew * block;
            m = (0.5 * (m + m.adjoint().eval())).eval();
            Eigen::SelfAdjointEigenSolver<CMatrix> sub(m);
            if (sub.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failure");
            v.middleCols(start, end - start) = block * sub.eigenvectors();
        }
        start = end;
    }

    Spectrum s;
    s.eigenphases.resize(static_cast<std::size_t>(n));
    s.eigenvectors = std::move(v);
    const CMatrix uv = u.entries() * s.eigenvectors;
    for (Eigen::Index j = 0; j < n; ++j) {
        const Amplitude lambda = s.eigenvectors.col(j).dot(uv.col(j));  // Rayleigh quotient
        s.eigenphases[static_cast<std::size_t>(j)] = to_branch(-std::arg(lambda), branch);
    }
    return s;
}

Spectrum spectrum(const GeneralizedPermutation& p, Branch branch) {
    const auto n = static_cast<Eigen::Index>(p.dim());
    Spectrum s;
    s.eigenphases.resize(p.dim());
    s.eigenvectors = CMatrix::Zero(n, n);
    Eigen::Index col = 0;
    for (const auto& cyc : p.cycles()) {
        const std::size_t len = cyc.size();
        // Accumulated phase gamma_m = sum of step phases before position m;
        // the total Phi fixes the eigenvalues as L-th roots of e^{i Phi}.
        std::vector<double> gamma(len, 0.0);
        for (std::size_t m = 1; m < len; ++m) gamma[m] = gamma[m - 1] + p.phase(cyc[m - 1]);
        const double total = gamma[len - 1] + p.phase(cyc[len - 1]);
        const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(len));
        for (std::size_t k = 0; k < len; ++k, ++col) {
            const double theta = (total + kTwoPi * static_cast<double>(k)) / static_cast<double>(len);
            s.eigenphases[static_cast<std::size_t>(col)] = to_branch(-theta, branch);
            for (std::size_t m = 0; m < len; ++m)
                s.eigenvectors(static_cast<Eigen::Index>(cyc[m]), col) =
                    std::polar(inv_sqrt, gamma[m] - theta * static_cast<double>(m));
        }
    }
    return s;
}

std::vector<double> eigenphases_of(const GeneralizedPermutation& p, Branch branch) {
    std::vector<double> phases;
    phases.reserve(p.dim());
    for (const auto& cyc : p.cycles()) {
        const std::size_t len = cyc.size();
        double total = 0.0;
        for (std::size_t j : cyc) total += p.phase(j);
        for (std::size_t k = 0; k < len; ++k) {
            const double theta = (total + kTwoPi * static_cast<double>(k)) / static_cast<double>(len);
            phases.push_back(to_branch(-theta, branch));
        }
    }
    return phases;
}

namespace {

CMatrix hamiltonian_from(const Spectrum& s, double dt) {
    const auto n = s.eigenvectors.rows();
    Eigen::VectorXcd d(n);
    for (Eigen::Index k = 0; k < n; ++k)
        d(k) = Amplitude(s.eigenphases[static_cast<std::size_t>(k)] / dt, 0.0);
    CMatrix h = s.eigenvectors * d.asDiagonal() * s.eigenvectors.adjoint();
    return 0.5 * (h + h.adjoint().eval());  // exact Hermiticity
}

}  // namespace

CMatrix extract_hamiltonian(const UnitaryMatrix& u, TimeStep dt, Branch branch) {
    return hamiltonian_from(spectrum(u, branch), dt.dt);
}

CMatrix extract_hamiltonian(const GeneralizedPermutation& p, TimeStep dt, Branch branch) {
    // Per cycle, H_{j_p j_q} = g_p conj(g_q) S_{(p-q) mod L} / (L dt) with
    // S_d = sum_k phi_k e^{-i theta_k d}: a circulant profile, O(L^2) total.
    const auto n = static_cast<Eigen::Index>(p.dim());
    CMatrix h = CMatrix::Zero(n, n);
    for (const auto& cyc : p.cycles()) {
        const std::size_t len = cyc.size();
        std::vector<double> gamma(len, 0.0);
        for (std::size_t m = 1; m < len; ++m) gamma[m] = gamma[m - 1] + p.phase(cyc[m - 1]);
        const double total = gamma[len - 1] + p.phase(cyc[len - 1]);

        std::vector<double> phi(len);
        std::vector<Amplitude> lam_conj(len);  // e^{-i theta_k}
        for (std::size_t k = 0; k < len; ++k) {
            const double theta = (total + kTwoPi * static_cast<double>(k)) / static_cast<double>(len);
            phi[k] = to_branch(-theta, branch);
            lam_conj[k] = std::polar(1.0, -theta);
        }

        // S_d via running powers of e^{-i theta_k}; drift is O(len * eps).
        std::vector<Amplitude> profile(len, Amplitude(0.0, 0.0));
        std::vector<Amplitude> pow_k(len, Amplitude(1.0, 0.0));
        for (std::size_t d = 0; d < len; ++d) {
            Amplitude acc(0.0, 0.0);
            for (std::size_t k = 0; k < len; ++k) {
                acc += phi[k] * pow_k[k];
                pow_k[k] *= lam_conj[k];
            }
            profile[d] = acc;
        }
        const double scale = 1.0 / (static_cast<double>(len) * dt.dt);
        const bool pure = std::all_of(cyc.begin(), cyc.end(), [&](std::size_t j) { return p.phase(j) == 0.0; });
        for (std::size_t q = 0; q < len; ++q) {
            for (std::size_t pp = q; pp < len; ++pp) {
                const std::size_t d = pp - q;
                Amplitude v = profile[d] * scale;
                if (!pure) v *= std::polar(1.0, gamma[pp] - gamma[q]);
                if (pp == q) v = Amplitude(v.real(), 0.0);
                h(static_cast<Eigen::Index>(cyc[pp]), static_cast<Eigen::Index>(cyc[q])) = v;
                h(static_cast<Eigen::Index>(cyc[q]), static_cast<Eigen::Index>(cyc[pp])) = std::conj(v);
            }
        }
    }
    return h;
}

CMatrix reconstruct_unitary(const Spectrum& s) {
    const auto n = s.eigenvectors.rows();
    Eigen::VectorXcd d(n);
    for (Eigen::Index k = 0; k < n; ++k)
        d(k) = std::polar(1.0, -s.eigenphases[static_cast<std::size_t>(k)]);
    return s.eigenvectors * d.asDiagonal() * s.eigenvectors.adjoint();
}

double roundtrip_residual(const GeneralizedPermutation& p, TimeStep dt, Branch branch) {
    (void)dt;  // the exponential of H dt depends on the eigenphases alone
    double worst = 0.0;
    for (const auto& cyc : p.cycles()) {
        const std::size_t len = cyc.size();
        std::vector<double> gamma(len, 0.0);
        for (std::size_t m = 1; m < len; ++m) gamma[m] = gamma[m - 1] + p.phase(cyc[m - 1]);
        const double total = gamma[len - 1] + p.phase(cyc[len - 1]);

        std::vector<Amplitude> val(len);       // e^{-i phi_k}, from branch-mapped phases
        std::vector<Amplitude> lam_conj(len);  // e^{-i theta_k}
        for (std::size_t k = 0; k < len; ++k) {
            const double theta = (total + kTwoPi * static_cast<double>(k)) / static_cast<double>(len);
            val[k] = std::polar(1.0, -to_branch(-theta, branch));
            lam_conj[k] = std::polar(1.0, -theta);
        }
        if (len == 1) {
            worst = std::max(worst, std::abs(val[0] - std::polar(1.0, total)));
            continue;
        }
        const double inv_len = 1.0 / static_cast<double>(len);
        const bool pure = std::all_of(cyc.begin(), cyc.end(), [&](std::size_t j) { return p.phase(j) == 0.0; });
        if (pure) {
            // Block entries depend only on d = (p-q) mod L: G_d / L must be 1
            // at d = 1 and 0 elsewhere.
            std::vector<Amplitude> pow_k = val;
            for (std::size_t d = 0; d < len; ++d) {
                Amplitude acc(0.0, 0.0);
                for (std::size_t k = 0; k < len; ++k) {
                    acc += pow_k[k];
                    pow_k[k] *= lam_conj[k];
                }
                const Amplitude entry = acc * inv_len;
                const double err = (d == 1) ? std::abs(entry - Amplitude(1.0, 0.0)) : std::abs(entry);
                worst = std::max(worst, err);
            }
        } else {
            // Small blocks in practice: materialize and compare entrywise.
            std::vector<Amplitude> profile(len);
            std::vector<Amplitude> pow_k = val;
            for (std::size_t d = 0; d < len; ++d) {
                Amplitude acc(0.0, 0.0);
                for (std::size_t k = 0; k < len; ++k) {
                    acc += pow_k[k];
                    pow_k[k] *= lam_conj[k];
                }
                profile[d] = acc * inv_len;
            }
            for (std::size_t q = 0; q < len; ++q) {
                for (std::size_t pp = 0; pp < len; ++pp) {
                    const std::size_t d = (pp + len - q) % len;
                    // G is periodic mod L only up to e^{i Phi}: wrapped
                    // offsets (pp < q) pick up the cycle's total phase.
                    const double wrap = pp < q ? total : 0.0;
                    const Amplitude entry =
                        std::polar(1.0, gamma[pp] - gamma[q] + wrap) * profile[d];
                    const Amplitude expected =
                        (pp == (q + 1) % len) ? std::polar(1.0, p.phase(cyc[q])) : Amplitude(0.0, 0.0);
                    worst = std::max(worst, std::abs(entry - expected));
                }
            }
        }
    }
    return worst;
}

CMatrix matrix_exp(const CMatrix& a) {
    const auto n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("matrix_exp: square matrix required");
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // infinity norm
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    const CMatrix b = a * scale;
    CMatrix term = CMatrix::Identity(n, n);
    CMatrix sum = term;
    for (int k = 1; k <= 40; ++k) {
        term = (term * b / static_cast<double>(k)).eval();
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-22) break;
    }
    for (int i = 0; i < squarings; ++i) sum = (sum * sum).eval();
    return sum;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    return (a - b).cwiseAbs().maxCoeff();
}

double unitarity_defect(const CMatrix& u) {
    const auto n = u.rows();
    return (u.adjoint() * u - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

UnitaryMatrix random_unitary(std::size_t dim, Rng& rng) {
    if (dim == 0) throw std::domain_error("random_unitary: dim must be positive");
    const auto n = static_cast<Eigen::Index>(dim);
    CMatrix z(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) z(i, j) = Amplitude(rng.next_gaussian(), rng.next_gaussian());
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const Amplitude rjj = r(j, j);
        const double mag = std::abs(rjj);
        if (mag > 0.0) q.col(j) *= rjj / mag;  // fix the phase gauge => Haar
    }
    return UnitaryMatrix(std::move(q));
}

GeneralizedPermutation random_generalized_permutation(std::size_t dim, Rng& rng, bool with_phases) {
    std::vector<std::size_t> t = random_permutation(dim, rng);
    std::vector<double> ph(dim, 0.0);
    if (with_phases) {
        for (auto& x : ph) x = (2.0 * rng.next_double() - 1.0) * kPi;
    }
    return GeneralizedPermutation(std::move(t), std::move(ph));
}

}  // namespace ontolab
