#include "spinrc/encoding.hpp"

#include <array>
#include <set>
#include <string>
#include <tuple>
#include <utility>

#include "spinrc/errors.hpp"
#include "spinrc/stno.hpp"

namespace spinrc {

BitImage binarize_image(std::span<const std::uint8_t> gray, std::uint8_t threshold) {
  if (gray.size() != 784)
    throw BadLength("binarize_image: expected 784 gray values, got " +
                    std::to_string(gray.size()));
  BitImage img;
  for (std::size_t i = 0; i < 784; ++i) img.bits[i] = gray[i] >= threshold ? 1 : 0;
  return img;
}

namespace {

// Pixel index for (stream s, bit b). Row-major: each 28-pixel image row
// splits into 7 consecutive 4-bit chunks, s = 7*row + chunk. Column-major is
// the transpose of the same scheme.
inline std::size_t pixel_index(int s, int b, ScanOrder order) {
  int major = s / 7;       // row (or column)
  int chunk = s % 7;
  int minor = chunk * 4 + b;
  if (order == ScanOrder::row_major) return static_cast<std::size_t>(major * 28 + minor);
  return static_cast<std::size_t>(minor * 28 + major);
}

}  // namespace

StreamMatrix image_to_streams(const BitImage& img, ScanOrder order) {
  StreamMatrix m;
  for (int s = 0; s < 196; ++s)
    for (int b = 0; b < 4; ++b)
      m.streams[static_cast<std::size_t>(s)][static_cast<std::size_t>(b)] =
          img.bits[pixel_index(s, b, order)];
  return m;
}

BitImage streams_to_image(const StreamMatrix& streams, ScanOrder order) {
  BitImage img;
  for (int s = 0; s < 196; ++s)
    for (int b = 0; b < 4; ++b)
      img.bits[pixel_index(s, b, order)] =
          streams.streams[static_cast<std::size_t>(s)][static_cast<std::size_t>(b)];
  return img;
}

PulseTrain stream_to_pulses(std::span<const std::uint8_t> stream, double amp_uA, double width_ns) {
  if (!(amp_uA > 0.0)) throw OutOfRange("stream_to_pulses: amp must be > 0");
  if (!(width_ns > 0.0)) throw OutOfRange("stream_to_pulses: width must be > 0");
  PulseTrain train;
  train.reserve(stream.size());
  for (std::uint8_t bit : stream) train.push_back(Pulse{bit ? amp_uA : -amp_uA, width_ns});
  return train;
}

int DriveBank::distinct_settings() const {
  std::set<std::pair<double, double>> amps;
  std::set<double> widths;
  for (const DriveConfig& c : configs) {
    amps.insert({c.i_offset, c.gain});
    widths.insert(c.pulse_width);
  }
  return static_cast<int>(amps.size() + widths.size());
}

void DriveBank::validate() const {
  if (configs.size() != 24) throw ConfigError("drive bank must contain exactly 24 configs");
  std::set<std::tuple<int, double, double, double>> tuples;
  std::array<int, 3> per_diameter{0, 0, 0};
  for (const DriveConfig& c : configs) {
    StnoParams node = stno_params_for_diameter(c.diameter);
    if (c.i_offset < node.i_th())
      throw ConfigError("drive bank: i_offset below the node threshold current");
    if (c.i_offset + c.gain * 0.5 > 0.40)
      throw ConfigError("drive bank: peak current exceeds the 0.40 mA stable window");
    if (!(c.pulse_width > 0.0)) throw ConfigError("drive bank: pulse_width must be > 0");
    if (!tuples.insert({c.diameter, c.i_offset, c.gain, c.pulse_width}).second)
      throw ConfigError("drive bank: duplicate (diameter, i_offset, gain, width) tuple");
    per_diameter[c.diameter == 240 ? 0 : (c.diameter == 270 ? 1 : 2)]++;
  }
  if (per_diameter[0] != 8 || per_diameter[1] != 8 || per_diameter[2] != 8)
    throw ConfigError("drive bank: expected 8 configs per diameter");
  if (distinct_settings() < 13)
    throw ConfigError("drive bank: fewer than 13 distinct amplitude/width settings");
}

DriveBank build_default_bank() {
  DriveBank bank;
  const int diameters[] = {240, 270, 300};
  const double gains[] = {0.2, 0.35, 0.5, 0.65};
  const double widths[] = {20.0, 40.0};
  int id = 0;
  for (int d : diameters) {
    double offset = 2.0 * stno_params_for_diameter(d).i_th();
    for (double g : gains)
      for (double w : widths)
        bank.configs.push_back(DriveConfig{id++, d, offset, g, w});
  }
  bank.validate();
  return bank;
}

PulseTrain series_to_pulse_train(std::span<const double> u, const DriveConfig& cfg) {
  PulseTrain train;
  train.reserve(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!(u[k] >= 0.0 && u[k] <= 0.5))
      throw OutOfRange("series_to_pulse_train: input at step " + std::to_string(k) +
                       " outside [0, 0.5]");
    train.push_back(Pulse{cfg.i_offset + cfg.gain * u[k], cfg.pulse_width});
  }
  return train;
}

}  // namespace spinrc
