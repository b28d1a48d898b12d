#include "spinrc/skyrmion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinrc/errors.hpp"
#include "spinrc/rk4.hpp"

namespace spinrc {

void SkyrmionParams::validate() const {
  if (!(track_length > 0.0)) throw ConfigError("skyrmion: track_length must be > 0");
  if (!(0.0 <= x_min && x_min < x_max && x_max <= track_length))
    throw ConfigError("skyrmion: require 0 <= x_min < x_max <= track_length");
  if (!(x_min <= x_init && x_init <= x_max))
    throw ConfigError("skyrmion: x_init must lie in [x_min, x_max]");
  if (!(w_center < w_end)) throw ConfigError("skyrmion: w_center must be < w_end");
  if (!(mu0 > 0.0)) throw ConfigError("skyrmion: mu0 must be > 0");
  if (!(lambda_edge > 0.0)) throw ConfigError("skyrmion: lambda_edge must be > 0");
  if (!(w_sigma > 0.0)) throw ConfigError("skyrmion: w_sigma must be > 0");
  if (!(sigma_c > 0.0)) throw ConfigError("skyrmion: sigma_c must be > 0");
}

namespace {

inline double track_width(double x, const SkyrmionParams& p) {
  double d = x - 0.5 * p.track_length;
  return p.w_end - (p.w_end - p.w_center) * std::exp(-d * d / (2.0 * p.w_sigma * p.w_sigma));
}

}  // namespace

double skyrmion_potential_slope(double x, const SkyrmionParams& p) {
  double left = -(p.u_edge / p.lambda_edge) * std::exp(-(x - p.x_min) / p.lambda_edge);
  double right = (p.u_edge / p.lambda_edge) * std::exp((x - p.x_max) / p.lambda_edge);
  double d = x - 0.5 * p.track_length;
  double center = p.u_c * d / (p.sigma_c * p.sigma_c) * std::exp(-d * d / (2.0 * p.sigma_c * p.sigma_c));
  return left + right + center;
}

double skyrmion_rhs(double x, double current_uA, const SkyrmionParams& p) {
  double drive = p.mu0 * current_uA * (p.w_end / track_width(x, p));
  return drive - skyrmion_potential_slope(x, p);
}

SkyrmionState skyrmion_reset(const SkyrmionParams& params) {
  return SkyrmionState{params.x_init, 0.0};
}

namespace {

// Shared pulse-train loop; `sample` may be empty.
SkyrmionState integrate(SkyrmionState state, const PulseTrain& train, double dt,
                        const SkyrmionParams& p, SkyrmionDiag* diag,
                        const std::function<void(double, double)>* sample, int stride) {
  if (!(dt > 0.0)) throw ConfigError("skyrmion: dt must be > 0");
  validate_train(train);
  std::int64_t clamps = 0;
  if (sample) (*sample)(state.t, state.x);
  long substep = 0;
  for (const Pulse& pulse : train) {
    const double current = pulse.amplitude;
    auto rhs = [&](double x) { return skyrmion_rhs(x, current, p); };
    double remaining = pulse.duration_ns;
    while (remaining > 1e-12) {
      double h = std::min(dt, remaining);
      double x = rk4_step<1>([&](const detail::Vec<1>& s) { return detail::Vec<1>{rhs(s[0])}; },
                             detail::Vec<1>{state.x}, h)[0];
      if (x < 0.0) {
        x = 0.0;
        ++clamps;
      } else if (x > p.track_length) {
        x = p.track_length;
        ++clamps;
      }
      state.x = x;
      state.t += h;
      remaining -= h;
      ++substep;
      if (sample && (substep % stride == 0)) (*sample)(state.t, state.x);
    }
  }
  if (diag) diag->clamp_events += clamps;
  return state;
}

}  // namespace

SkyrmionState skyrmion_step(SkyrmionState state, const PulseTrain& train, double dt,
                            const SkyrmionParams& params, SkyrmionDiag* diag) {
  params.validate();
  return integrate(state, train, dt, params, diag, nullptr, 1);
}

SkyrmionState skyrmion_trace(SkyrmionState state, const PulseTrain& train, double dt,
                             const SkyrmionParams& params,
                             const std::function<void(double, double)>& sample, int stride,
                             SkyrmionDiag* diag) {
  params.validate();
  if (stride < 1) throw ConfigError("skyrmion: trace stride must be >= 1");
  return integrate(state, train, dt, params, diag, &sample, stride);
}

SeparabilityReport calibrate_msm_separability(const SkyrmionParams& params, double amp_uA,
                                              double width_ns, double dt) {
  params.validate();
  SeparabilityReport report;
  SkyrmionDiag diag;
  for (int word = 0; word < 16; ++word) {
    PulseTrain train;
    for (int bit = 3; bit >= 0; --bit) {
      bool one = (word >> bit) & 1;
      train.push_back(Pulse{one ? amp_uA : -amp_uA, width_ns});
    }
    SkyrmionState s = skyrmion_step(skyrmion_reset(params), train, dt, params, &diag);
    report.final_x[static_cast<std::size_t>(word)] = s.x;
  }
  report.clamp_events = diag.clamp_events;

  std::array<double, 16> sorted = report.final_x;
  std::sort(sorted.begin(), sorted.end());
  // Cluster positions closer than 0.5 nm, then report the cluster count and
  // the smallest gap between adjacent clusters.
  std::vector<double> reps;
  reps.push_back(sorted[0]);
  for (int i = 1; i < 16; ++i) {
    if (sorted[static_cast<std::size_t>(i)] - reps.back() > 0.5) {
      reps.push_back(sorted[static_cast<std::size_t>(i)]);
    }
  }
  report.distinct = static_cast<int>(reps.size());
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < reps.size(); ++i) {
    min_gap = std::min(min_gap, reps[i] - reps[i - 1]);
  }
  report.min_gap = reps.size() > 1 ? min_gap : 0.0;
  return report;
}

}  // namespace spinrc
