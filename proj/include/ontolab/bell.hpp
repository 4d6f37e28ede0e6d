#pragma once

// EPR/Bell simulation under the mousedrop hidden-variable density
// W(a,b,c) = C |sin(4c - 2a - 2b)| on c in [0, pi), C = 1/2.
//
// The detection rule sign(cos(2(setting - c))) is a model choice: the density
// alone fixes no outcome rule, and a deterministic sign is the minimal choice
// with no residual randomness at the detectors. Whether density + rule
// reproduce the quantum correlation is measured and reported, never asserted.
//
// Quadrature splits [0, pi) at the known kinks of |sin| and the detector sign
// jumps, then applies 16-point Gauss-Legendre per panel, so piecewise-smooth
// integrands converge to machine precision.

#include <cstdint>
#include <functional>
#include <vector>

#include "ontolab/exec.hpp"
#include "ontolab/rng.hpp"

namespace ontolab {

/// Normalization C of the density for the domain [0, pi). Other domain
/// conventions rescale it; this one is verified by quadrature in the tests.
inline constexpr double kMousedropNormalization = 0.5;

inline constexpr double kClassicalBound = 2.0;
inline constexpr double kTsirelsonBound = 2.8284271247461903;

/// Reduces an angle into [0, pi) (polarization angles are pi-periodic).
double reduce_angle(double radians);

/// Polarizer orientations of the two wings, stored reduced to [0, pi).
struct PolarizerSettings {
    PolarizerSettings(double a_radians, double b_radians);
    double a;
    double b;
};

/// Shared photon polarization (one c serves both wings), in [0, pi).
struct HiddenPolarization {
    double c = 0.0;
};

/// W(a,b,c) = C |sin(4c - 2a - 2b)|.
double mousedrop_density(double a, double b, double c);

/// 1 / integral of |sin(4c - 2a - 2b)| over [0, pi): the normalization
/// constant the density needs, measured rather than assumed.
double fitted_normalization(double a, double b, std::size_t panels = 512);

/// Rejection sampling with a flat envelope at the density's maximum C; the
/// acceptance rate is 2/pi. Consumes exactly two draws per proposal.
HiddenPolarization sample_hidden(double a, double b, Rng& rng);

/// Deterministic outcome sign(cos(2(setting - c))); the measure-zero
/// boundary cos = 0 maps to +1.
int detect(double setting, double c);

enum class Method { montecarlo, quadrature };

struct CorrelationEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;  // samples (Monte Carlo) or panels (quadrature)
    Method method = Method::quadrature;
};

/// E(a,b) = int W(a,b,c) detect(a,c) detect(b,c) dc by breakpoint-split
/// Gauss-Legendre; std_error is the refinement difference against half the
/// panel count. panels >= 8.
CorrelationEstimate correlation_quadrature(double a, double b, std::size_t panels);

/// Monte Carlo over sample_hidden. Work is split into fixed 65536-sample
/// batches; batch b draws from derive_seed(seed, b), and the +-1 products are
/// accumulated as integers, so the estimate is independent of thread count.
CorrelationEstimate correlation_montecarlo(double a, double b, std::uint64_t n, std::uint64_t seed,
                                           Exec exec = Exec::parallel);

CorrelationEstimate correlation(double a, double b, Method method, std::uint64_t n_or_panels,
                                std::uint64_t seed, Exec exec = Exec::parallel);

struct ChshResult {
    double s = 0.0;
    CorrelationEstimate ab, abp, apb, apbp;
};

/// S = E(a,b) - E(a,b') + E(a',b) + E(a',b'). Monte Carlo components draw
/// from sub-streams derive_seed(seed, k), k = 0..3.
ChshResult chsh(double a, double ap, double b, double bp, Method method, std::uint64_t n_or_panels,
                std::uint64_t seed, Exec exec = Exec::parallel);

/// Total variation distance between W(a,b,.) and W(a',b',.), by quadrature.
/// Zero exactly when 2a+2b and 2a'+2b' agree mod pi.
double counterfactual_shift(double a, double b, double ap, double bp, std::size_t panels = 512);

/// Standard quantum prediction cos(2(a-b)) for perfectly entangled photon
/// polarizations. External reference for comparison output only.
double quantum_reference(double a, double b);

/// Histogram of n hidden-variable samples over equal bins of [0, pi); same
/// deterministic batch layout as the Monte Carlo correlation.
std::vector<std::int64_t> sample_histogram(double a, double b, std::uint64_t n, std::size_t bins,
                                           std::uint64_t seed, Exec exec = Exec::parallel);

/// Quadrature mass of each histogram bin under W(a,b,.).
std::vector<double> bin_masses_quadrature(double a, double b, std::size_t bins, std::size_t panels = 512);

/// Empirical mean and quadrature moments of sin(4c - 2a - 2b) under the
/// density; used by the sampler-fidelity checks.
double sample_mean_sine(double a, double b, std::uint64_t n, std::uint64_t seed, Exec exec = Exec::parallel);
double quadrature_mean_sine(double a, double b, std::size_t panels = 512);
double quadrature_var_sine(double a, double b, std::size_t panels = 512);

/// Integral of f over [lo, hi] split at the interior breakpoints, with
/// `panels` Gauss-Legendre panels distributed by subinterval length.
double integrate_piecewise(const std::function<double(double)>& f, double lo, double hi,
                           std::vector<double> interior_breakpoints, std::size_t panels);

/// Breakpoints of c -> W(a,b,c)*detect(a,c)*detect(b,c) inside (0, pi).
std::vector<double> integrand_breakpoints(double a, double b);

}  // namespace ontolab
