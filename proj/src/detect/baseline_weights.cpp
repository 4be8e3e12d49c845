#include "cookiepilot/detect/classifier.hpp"

namespace cookiepilot::detect {

// Produced by tools/calibrate_baseline on fixtures/classifier/labeled.jsonl
// plus the fixture site candidates. Re-run after changing the features.
const BaselineWeights& default_baseline_weights() {
  static const BaselineWeights kWeights = {
      {2.510, 1.486, -0.043, -0.647, 0.640, 0.000},
      -3.494,
  };
  return kWeights;
}

}  // namespace cookiepilot::detect
