// Straight-line serial transcriptions of the detectors, kept as the
// reference the optimized OpenMP kernels are tested against. No midstate
// caching, no parallelism: every draw rebuilds the keyed hash from scratch
// and hypotheses are scanned in order. Outputs must match the production
// detectors bit for bit.
#pragma once

#include "discmark/disc.hpp"
#include "discmark/zerobit.hpp"

namespace discmark::reference {

detection_report detect_no_init(const bit_string& bits, const secret_key& key,
                                const encoder_config& cfg, double fpr);

detection_report detect_with_init(const bit_string& bits, const secret_key& key,
                                  const encoder_config& cfg, double fpr);

disc_detection_report disc_decode_exhaustive(const bit_string& bits, const secret_key& key,
                                             const encoder_config& cfg, const disc_config& disc,
                                             double fpr);

}  // namespace discmark::reference
