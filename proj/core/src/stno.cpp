#include "spinrc/stno.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinrc/errors.hpp"
#include "spinrc/rk4.hpp"

namespace spinrc {

void StnoParams::validate() const {
  if (!(gamma_g > 0.0)) throw ConfigError("stno: gamma_g must be > 0");
  if (!(sigma_i > 0.0)) throw ConfigError("stno: sigma_i must be > 0");
  if (!(q >= 0.0)) throw ConfigError("stno: q must be >= 0");
  double ith = i_th();
  if (!(ith > 0.01 && ith < 0.40))
    throw ConfigError("stno: threshold current gamma_g/sigma_i must lie in (0.01, 0.40) mA");
  if (!(p_floor > 0.0 && p_floor < 1e-2)) throw ConfigError("stno: p_floor must lie in (0, 1e-2)");
}

StnoParams stno_params_for_diameter(int diameter_nm) {
  StnoParams p;
  p.diameter = diameter_nm;
  switch (diameter_nm) {
    case 240:
      p.gamma_g = 0.0280;
      p.sigma_i = 1.00;
      p.f0 = 1.0;
      break;
    case 270:
      p.gamma_g = 0.0255;
      p.sigma_i = 0.80;
      p.f0 = 0.9;
      break;
    case 300:
      p.gamma_g = 0.0235;
      p.sigma_i = 0.65;
      p.f0 = 0.8;
      break;
    default:
      throw ConfigError("stno: diameter must be 240, 270 or 300 nm");
  }
  p.q = 2.0;
  p.n_shift = 0.2;
  return p;
}

std::pair<double, double> stno_rhs(const StnoState& state, double current_mA,
                                   const StnoParams& p) {
  double dp = 2.0 * state.p *
              (-p.gamma_g * (1.0 + p.q * state.p) + p.sigma_i * current_mA * (1.0 - state.p));
  double dphi = 2.0 * std::numbers::pi * (p.f0 + p.n_shift * state.p);
  return {dp, dphi};
}

double stno_steady_power(double current_mA, const StnoParams& p) {
  double drive = p.sigma_i * current_mA;
  if (drive <= p.gamma_g) return 0.0;
  return (drive - p.gamma_g) / (drive + p.q * p.gamma_g);
}

StnoRun stno_step(StnoState state, const PulseTrain& train, double dt, const StnoParams& params,
                  const std::function<void(double, double, double)>& sample, int stride) {
  params.validate();
  if (!(dt > 0.0)) throw ConfigError("stno: dt must be > 0");
  validate_train(train);

  StnoRun run;
  run.at_pulse_end.reserve(train.size());
  state.p = std::max(state.p, params.p_floor);
  if (sample) sample(state.t, state.p, state.phi);
  long substep = 0;
  for (const Pulse& pulse : train) {
    const double current = pulse.amplitude;
    auto rhs = [&](const detail::Vec<2>& s) -> detail::Vec<2> {
      StnoState tmp{s[0], s[1], 0.0};
      auto [dp, dphi] = stno_rhs(tmp, current, params);
      return {dp, dphi};
    };
    double remaining = pulse.duration_ns;
    while (remaining > 1e-12) {
      double h = std::min(dt, remaining);
      detail::Vec<2> next = rk4_step<2>(rhs, detail::Vec<2>{state.p, state.phi}, h);
      if (next[0] < 0.0) {
        next[0] = 0.0;
        ++run.clamp_events;
      } else if (next[0] > 1.0) {
        next[0] = 1.0;
        ++run.clamp_events;
      }
      state.p = next[0];
      state.phi = next[1];
      state.t += h;
      remaining -= h;
      ++substep;
      if (sample && (substep % stride == 0)) sample(state.t, state.p, state.phi);
    }
    run.at_pulse_end.push_back(state);
  }
  run.final = state;
  return run;
}

}  // namespace spinrc
