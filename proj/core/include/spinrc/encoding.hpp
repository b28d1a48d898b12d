#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "spinrc/pulse.hpp"

namespace spinrc {

// 28x28 binary image in row-major order.
struct BitImage {
  std::array<std::uint8_t, 784> bits{};
};

// 196 streams of 4 bits each; concatenating the rows reproduces the source
// image bit-for-bit under the chosen scan order.
struct StreamMatrix {
  std::array<std::array<std::uint8_t, 4>, 196> streams{};
};

enum class ScanOrder { row_major, column_major };

// bit = 1 iff gray >= threshold.
BitImage binarize_image(std::span<const std::uint8_t> gray, std::uint8_t threshold = 128);

StreamMatrix image_to_streams(const BitImage& img, ScanOrder order = ScanOrder::row_major);
BitImage streams_to_image(const StreamMatrix& streams, ScanOrder order = ScanOrder::row_major);

// bit 1 -> (+amp, width), bit 0 -> (-amp, width), in stream order.
PulseTrain stream_to_pulses(std::span<const std::uint8_t> stream, double amp_uA, double width_ns);

// Per-node affine input-to-current mapping for the STNO bank.
struct DriveConfig {
  int node_id = 0;
  int diameter = 240;        // nm
  double i_offset = 0.0;     // mA, bias current (>= node threshold)
  double gain = 0.0;         // mA per unit input
  double pulse_width = 0.0;  // ns
};

struct DriveBank {
  std::vector<DriveConfig> configs;

  // Distinct amplitude mappings (i_offset, gain) plus distinct widths; the
  // bank must offer at least 13.
  int distinct_settings() const;
  void validate() const;
};

// 24 configs: per diameter in {240, 270, 300}, the cross of gains
// {0.2, 0.35, 0.5, 0.65} mA/unit with widths {20, 40} ns, biased at twice the
// diameter's threshold current.
DriveBank build_default_bank();

// pulse k = (i_offset + gain * u(k), pulse_width). Inputs must lie in [0, 0.5].
PulseTrain series_to_pulse_train(std::span<const double> u, const DriveConfig& cfg);

}  // namespace spinrc
