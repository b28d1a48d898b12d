// Grid search for the skyrmion-track coefficients. A parameter set is
// admitted when
//   (a) a 100 ns dc pulse at +/-30 uA never hits the hard clamp,
//   (b) the 16 four-bit words at (20 uA, 10 ns) settle on >= 12 positions
//       separated by >= 1 nm,
//   (c) an alternating +/-16 uA, 14 ns train covers at least half the track.
// Among admitted sets the tool ranks by word count, then minimum gap, and
// prints the winners as ready-to-paste defaults.

#include <algorithm>
#include <cstdio>
#include <vector>

#include "spinrc/skyrmion.hpp"

using namespace spinrc;

namespace {

struct Candidate {
  SkyrmionParams p;
  SeparabilityReport sep;
  double traversal = 0.0;  // fraction of track covered by the ac trace
  bool confined = false;
};

bool check_confined(const SkyrmionParams& p) {
  for (double amp : {30.0, -30.0}) {
    SkyrmionDiag diag;
    skyrmion_step(skyrmion_reset(p), {{amp, 100.0}}, 0.05, p, &diag);
    if (diag.clamp_events > 0) return false;
  }
  return true;
}

double check_traversal(const SkyrmionParams& p) {
  PulseTrain train;
  for (int i = 0; i < 10; ++i) train.push_back({i % 2 == 0 ? 16.0 : -16.0, 14.0});
  double lo = 1e300, hi = -1e300;
  skyrmion_trace(skyrmion_reset(p), train, 0.05, p, [&](double, double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  });
  return (hi - lo) / p.track_length;
}

}  // namespace

int main() {
  std::vector<Candidate> admitted;
  long long tried = 0;

  for (double mu0 : {0.08, 0.10, 0.12, 0.14, 0.16})
    for (double u_edge : {30.0, 45.0, 60.0, 90.0, 120.0})
      for (double lambda_edge : {10.0, 15.0, 20.0, 25.0})
        for (double u_c : {0.0, 60.0, 120.0, 180.0, 240.0})
          for (double sigma_c : {15.0, 25.0, 35.0})
            for (double w_sigma : {30.0, 45.0, 60.0}) {
              SkyrmionParams p;
              p.mu0 = mu0;
              p.u_edge = u_edge;
              p.lambda_edge = lambda_edge;
              p.u_c = u_c;
              p.sigma_c = sigma_c;
              p.w_sigma = w_sigma;
              ++tried;
              Candidate c;
              c.p = p;
              c.confined = check_confined(p);
              if (!c.confined) continue;
              c.sep = calibrate_msm_separability(p, 20.0, 10.0);
              if (c.sep.clamp_events > 0) continue;
              if (c.sep.distinct < 12 || c.sep.min_gap < 1.0) continue;
              c.traversal = check_traversal(p);
              if (c.traversal < 0.5) continue;
              admitted.push_back(c);
            }

  std::sort(admitted.begin(), admitted.end(), [](const Candidate& a, const Candidate& b) {
    if (a.sep.distinct != b.sep.distinct) return a.sep.distinct > b.sep.distinct;
    return a.sep.min_gap > b.sep.min_gap;
  });

  std::printf("tried %lld parameter sets, %zu admitted\n\n", tried, admitted.size());
  int shown = 0;
  for (const Candidate& c : admitted) {
    if (++shown > 10) break;
    std::printf(
        "distinct=%d min_gap=%.2f traversal=%.2f | mu0=%.2f u_edge=%.0f lambda_edge=%.0f "
        "u_c=%.0f sigma_c=%.0f w_sigma=%.0f\n",
        c.sep.distinct, c.sep.min_gap, c.traversal, c.p.mu0, c.p.u_edge, c.p.lambda_edge,
        c.p.u_c, c.p.sigma_c, c.p.w_sigma);
    if (shown == 1) {
      std::printf("  finals:");
      for (double x : c.sep.final_x) std::printf(" %.2f", x);
      std::printf("\n");
    }
  }
  return 0;
}
