#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fastmi/pseudo_obs.hpp"

namespace fastmi {

// Square spatial window with m nodes per axis.  Node j sits at x_lo + j*dx;
// the window is treated as one period of length m*dx, so x_hi itself is not a
// node.  Frequencies use the centered layout k = -m/2 .. m/2-1 at spacing dt.
struct GridSpec {
  std::size_t m = 256;
  double x_lo = 0.0;
  double x_hi = 0.0;

  double dx() const { return (x_hi - x_lo) / static_cast<double>(m); }
  double dt() const { return two_pi_over_span(); }
  double node(std::size_t j) const { return x_lo + dx() * static_cast<double>(j); }
  // Frequency of centered row/column index idx in [0, m).
  double freq(std::size_t idx) const {
    return dt() * (static_cast<double>(idx) - static_cast<double>(m / 2));
  }

 private:
  double two_pi_over_span() const;
};

// Complex function sampled on the centered m-by-m frequency grid, split
// planes indexed kx*m + ky with the zero frequency at (m/2, m/2).
struct ComplexGrid {
  std::size_t m = 0;
  std::vector<double> re, im;

  std::size_t size() const { return m * m; }
};

// Empirical characteristic function of a probit sample.
struct EcfGrid {
  ComplexGrid values;
  std::size_t n = 0;  // sample size behind the estimate
  GridSpec grid;      // spatial grid the frequency axis derives from
};

// Frequencies kept by the significance filter: |C|^2 >= threshold and
// 4-connected to the zero-frequency bin.
struct FilterMask {
  std::size_t m = 0;
  double threshold = 0.0;  // 4(n-1)/n^2, applied to |C|^2
  std::size_t kept = 0;
  std::vector<std::uint8_t> keep;

  double volume(double dt) const { return static_cast<double>(kept) * dt * dt; }
};

// Fourier-domain smoothing weights: zero off the mask, [n/(2(n-1)), 1] on it.
struct TransformKernel {
  std::size_t m = 0;
  std::vector<double> weight;
};

// Density estimate on the spatial grid.  Values sit at or above the clip
// floor and Riemann-sum to one.
struct DensityGrid {
  GridSpec grid;
  double floor = 0.0;         // plateau value after renormalization
  double raw_mass = 0.0;      // Riemann sum before clipping and renormalization
  std::vector<double> value;  // indexed ix*m + iy
};

enum class EcfMode { direct, binned };

// Symmetric window [-L, L] with L = max coordinate magnitude + pad.
// m must be a power of two >= 32; pad must be nonnegative.
GridSpec build_grid(const ProbitSample &probit, std::size_t m, double pad);

// direct: (1/n) sum_j exp(i t . Z_j) at every grid frequency.
// binned: linear binning onto the spatial grid, FFT, then deconvolution of
// the binning window; agrees with direct within 1e-3 on retained frequencies.
// Points outside the window raise GridOverflow.
EcfGrid compute_ecf(const ProbitSample &probit, const GridSpec &grid, EcfMode mode);

// Flood fill (4-connectivity) from the zero bin over {|C|^2 >= 4(n-1)/n^2}.
// Above-threshold bins not connected to the origin are dropped, as are the
// unpaired Nyquist row and column (centered index 0), whose conjugate
// frequencies fall outside the grid; the retained set is therefore closed
// under t -> -t and the smoothed transform inverts to a real field.
FilterMask acceptable_frequency_mask(const EcfGrid &ecf);

// kappa(t) = n/(2(n-1)) * (1 + sqrt(1 - 4(n-1)/|n C(t)|^2)) on the mask, zero
// elsewhere.  The radicand is clamped to [0,1] against round-off and the zero
// bin is pinned to exactly one.
TransformKernel optimal_transform_kernel(const EcfGrid &ecf, const FilterMask &mask);

// Smoothed characteristic function phi(t) = kappa(t) * C(t), elementwise.
ComplexGrid sce_transform(const EcfGrid &ecf, const TransformKernel &kernel);

// Iterative route to the same smoothed characteristic function: on each
// masked frequency, iterate the modulus recurrence whose fixed point solves
// (n-1)|phi|^2 + 1 = n|phi||C|, starting from phi_0 = C, until the sup-norm
// step falls below tol.  Off-mask frequencies are zero.  Cross-check oracle
// for sce_transform, not the production path.  Frequencies still moving
// after max_iter raise NonConvergence carrying their count.
ComplexGrid fixed_point_phi(const EcfGrid &ecf, double tol = 1e-13,
                            std::size_t max_iter = 1000000);

// Inverse discrete transform with continuous 1/(2pi)^2 scaling, clip below at
// floor_rel * peak, renormalize to unit Riemann sum.  An imaginary residue
// above 1e-8 relative sup-norm raises AsymmetrySignal.
DensityGrid invert_to_density(const ComplexGrid &phi_hat, const GridSpec &grid,
                              double floor_rel);

struct SceConfig {
  std::size_t grid_size = 256;
  double pad = 1.0;
  EcfMode ecf = EcfMode::binned;
  // Clip level for the band-limited inversion, relative to the density peak.
  // The hard frequency cutoff makes the tails ring through zero near the most
  // extreme observations; 1e-3 keeps those evaluations at roughly kernel
  // resolution instead of punching log-scale holes in downstream averages.
  double floor_rel = 1e-3;
};

// Full pipeline on an existing grid: ECF, mask, kernel, inversion.
DensityGrid estimate_density(const ProbitSample &probit, const GridSpec &grid,
                             const SceConfig &config);

}  // namespace fastmi
