#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "spinrc/pulse.hpp"

namespace spinrc {

// Auto-oscillator power model of a spin-torque nano-oscillator:
//   dp/dt   = 2 p [ -gamma_g (1 + q p) + sigma_i I (1 - p) ]
//   dphi/dt = 2 pi (f0 + n_shift p)
// The reservoir observable is the envelope sqrt(p); phi is carried along but
// unused by the feature path.
struct StnoParams {
  double gamma_g = 0.0280;  // ns^-1, natural power damping rate
  double q = 2.0;           // nonlinear damping coefficient
  double sigma_i = 1.0;     // mA^-1 ns^-1, spin-torque efficiency
  double f0 = 1.0;          // GHz, base precession frequency
  double n_shift = 0.2;     // GHz per unit p
  int diameter = 240;       // nm, one of 240 / 270 / 300
  double p_floor = 9e-3;    // thermal seed power

  double i_th() const { return gamma_g / sigma_i; }  // mA
  void validate() const;
};

// Per-diameter defaults. Thresholds land at 0.0280 / 0.0319 / 0.0362 mA,
// inside the 0.01-0.40 mA stable-oscillation window, with small-signal
// relaxation times 1/(2 gamma_g) of 18-21 ns. The damping rates are chosen
// so that at twice threshold any two powers in [p_floor, 0.9] contract to
// within 1e-3 inside 200 ns (the echo property; the binding start is
// p_floor, whose logistic escape time is ln(p*/p_floor) / (2 gamma_g)).
StnoParams stno_params_for_diameter(int diameter_nm);

struct StnoState {
  double p = 0.0;    // normalized power
  double phi = 0.0;  // rad
  double t = 0.0;    // ns
};

struct StnoDiag {
  std::int64_t clamp_events = 0;
};

// (dp/dt, dphi/dt) at the given drive current (mA).
std::pair<double, double> stno_rhs(const StnoState& state, double current_mA,
                                   const StnoParams& params);

// Steady-state power: 0 below threshold, else the root of the power equation
// (sigma_i I - gamma_g) / (sigma_i I + q gamma_g).
double stno_steady_power(double current_mA, const StnoParams& params);

struct StnoRun {
  std::vector<StnoState> at_pulse_end;  // one entry per pulse
  StnoState final{};
  std::int64_t clamp_events = 0;
};

// Integrates across the train with RK4. p is seeded to max(p, p_floor) at
// train start and clamped to [0, 1] per substep (clamps are counted).
// `sample(t, p, phi)`, when given, fires every `stride`-th substep.
StnoRun stno_step(StnoState state, const PulseTrain& train, double dt, const StnoParams& params,
                  const std::function<void(double, double, double)>& sample = nullptr,
                  int stride = 1);

inline constexpr double kStnoDefaultDt = 0.01;  // ns

}  // namespace spinrc
