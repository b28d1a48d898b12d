#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace spinrc {

namespace detail {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
inline Vec<N> axpy(const Vec<N>& y, double a, const Vec<N>& x) {
  Vec<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + a * x[i];
  return r;
}

}  // namespace detail

// Classical fixed-step 4th-order Runge-Kutta over [0, duration]. The last
// step is shortened so the integration lands exactly on the requested
// duration. `rhs(state)` returns the time derivative; autonomous form is
// enough for the piecewise-constant drives used here.
template <std::size_t N, typename Rhs>
detail::Vec<N> rk4_integrate(Rhs&& rhs, detail::Vec<N> y, double duration, double dt) {
  using detail::axpy;
  double t = 0.0;
  while (t < duration - 1e-12) {
    double h = dt;
    if (t + h > duration) h = duration - t;
    detail::Vec<N> k1 = rhs(y);
    detail::Vec<N> k2 = rhs(axpy(y, 0.5 * h, k1));
    detail::Vec<N> k3 = rhs(axpy(y, 0.5 * h, k2));
    detail::Vec<N> k4 = rhs(axpy(y, h, k3));
    for (std::size_t i = 0; i < N; ++i) {
      y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    t += h;
  }
  return y;
}

// Single RK4 step of size h. Node integrators drive this directly so they
// can clamp and trace at substep granularity.
template <std::size_t N, typename Rhs>
detail::Vec<N> rk4_step(Rhs&& rhs, const detail::Vec<N>& y, double h) {
  using detail::axpy;
  detail::Vec<N> k1 = rhs(y);
  detail::Vec<N> k2 = rhs(axpy(y, 0.5 * h, k1));
  detail::Vec<N> k3 = rhs(axpy(y, 0.5 * h, k2));
  detail::Vec<N> k4 = rhs(axpy(y, h, k3));
  detail::Vec<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

// Scalar convenience wrapper.
template <typename Rhs>
double rk4_integrate_scalar(Rhs&& rhs, double y, double duration, double dt) {
  auto vec_rhs = [&rhs](const detail::Vec<1>& s) -> detail::Vec<1> { return {rhs(s[0])}; };
  return rk4_integrate<1>(vec_rhs, detail::Vec<1>{y}, duration, dt)[0];
}

}  // namespace spinrc
