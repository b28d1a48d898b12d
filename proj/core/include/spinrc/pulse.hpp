#pragma once

#include <vector>

#include "spinrc/errors.hpp"

namespace spinrc {

// Rectangular current pulse. Amplitude units are whatever the driven node
// expects (uA for the skyrmion memristor, mA for the STNO).
struct Pulse {
  double amplitude = 0.0;
  double duration_ns = 0.0;
};

using PulseTrain = std::vector<Pulse>;

inline void validate_train(const PulseTrain& train) {
  if (train.empty()) throw BadLength("pulse train must contain at least one pulse");
  for (const Pulse& p : train) {
    if (!(p.duration_ns > 0.0)) throw OutOfRange("pulse duration must be > 0");
  }
}

inline double train_duration(const PulseTrain& train) {
  double total = 0.0;
  for (const Pulse& p : train) total += p.duration_ns;
  return total;
}

}  // namespace spinrc
