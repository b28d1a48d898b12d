#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "spinrc/pulse.hpp"

namespace spinrc {

// Reduced-order model of the skyrmion memristor: the skyrmion position x on
// a dumbbell-shaped track obeys an overdamped 1-D ODE. The drive term scales
// with the local track-width ratio w_end / w(x); soft exponential walls and a
// Gaussian potential around the constriction supply the position-dependent
// nonlinearity. Default coefficients were frozen from tools/calibrate_msm.
struct SkyrmionParams {
  double track_length = 200.0;  // nm
  double x_min = 10.0;          // nm, reflective soft bound
  double x_max = 190.0;         // nm
  double x_init = 30.0;         // nm
  double w_end = 60.0;          // nm, strip width at the ends
  double w_center = 30.0;       // nm, width at the constriction
  double w_sigma = 60.0;        // nm, Gaussian width of the constriction profile
  double mu0 = 0.16;            // nm ns^-1 uA^-1, current mobility
  double u_edge = 120.0;        // nm^2 ns^-1, edge-repulsion energy scale
  double lambda_edge = 25.0;    // nm, edge-repulsion decay length
  double u_c = 120.0;           // constriction potential scale
  double sigma_c = 35.0;        // nm, constriction potential width

  void validate() const;
};

struct SkyrmionState {
  double x = 0.0;  // nm
  double t = 0.0;  // ns
};

struct SkyrmionDiag {
  std::int64_t clamp_events = 0;
};

// Drift velocity v(x, I) in nm/ns.
double skyrmion_rhs(double x, double current_uA, const SkyrmionParams& params);

// Derivative of the confining potential; exposed for calibration checks.
double skyrmion_potential_slope(double x, const SkyrmionParams& params);

SkyrmionState skyrmion_reset(const SkyrmionParams& params);

// RK4 across each pulse in order; the final substep of every pulse is
// shortened to land exactly on the pulse boundary. Positions are hard-clamped
// to [0, track_length]; each clamp increments diag->clamp_events (a clamp in
// the accepted operating range indicates a miscalibrated parameter set, not a
// physical reflection).
SkyrmionState skyrmion_step(SkyrmionState state, const PulseTrain& train, double dt,
                            const SkyrmionParams& params, SkyrmionDiag* diag = nullptr);

// Dense-trace variant: invokes sample(t_ns, x_nm) after every `stride`-th
// substep (and at the initial point).
SkyrmionState skyrmion_trace(SkyrmionState state, const PulseTrain& train, double dt,
                             const SkyrmionParams& params,
                             const std::function<void(double, double)>& sample,
                             int stride = 1, SkyrmionDiag* diag = nullptr);

struct SeparabilityReport {
  std::array<double, 16> final_x{};  // indexed by the 4-bit word, MSB first
  int distinct = 0;                  // clusters separated by > 0.5 nm
  double min_gap = 0.0;              // smallest gap between adjacent clusters
  std::int64_t clamp_events = 0;
};

// Simulates all 16 four-bit words (bit 1 -> +amp, bit 0 -> -amp, each pulse
// `width` ns long) from the reset state and reports how well the final
// positions separate.
SeparabilityReport calibrate_msm_separability(const SkyrmionParams& params, double amp_uA,
                                              double width_ns, double dt = 0.05);

inline constexpr double kSkyrmionDefaultDt = 0.05;  // ns

}  // namespace spinrc
