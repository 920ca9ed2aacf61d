// Copyright 2026 The RawHDR Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAWHDR_SENSOR_HPP_
#define RAWHDR_SENSOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rawhdr/bayer.hpp"

namespace rawhdr {

// Linear photoelectric response model of a CMOS pixel.
//
// The spectral integral of irradiance times quantum efficiency is folded
// into a single per-pixel scene value; charge_coeff converts it (and the
// exposure-dependent factors) to collected electrons.
struct SensorParams {
  double analog_gain = 1.0;       // dimensionless
  double digital_gain = 1.0;      // dimensionless
  double exposure_time = 0.01;    // seconds
  double spatial_response = 1.0;  // dimensionless mean site response
  double area = 1.0e-11;          // m^2, effective photosite area
  double charge_coeff = 1.0;      // electrons per (W * s * m^-2)
  double offset_voltage = 0.0;    // volts
  double quant_step = 1.0e-4;     // volts per DN
};

// Throws ParameterError unless every field is strictly positive
// (offset_voltage may be zero).
void validate(const SensorParams& p);

// DN = (Ka * T * S * A * charge_coeff * irradiance + V_offset) / quant_step
//      * Kd.
// Linear in irradiance when V_offset = 0, so scaling exposure time and
// scaling digital gain produce the same response.
double sensor_response(double scene_irradiance, const SensorParams& p);
std::vector<double> sensor_response(const std::vector<double>& scene_irradiance,
                                    const SensorParams& p);

// Signal-dependent Gaussian noise in normalized-signal units:
// variance(x) = shot_coeff * x + read_sigma^2.
//
// These defaults are illustrative surrogates for a dual-exposure security
// sensor, not measurements of any specific part; calibrate your sensor and
// override them via the JSON config for production data.
struct NoiseModel {
  double shot_coeff = 0.0;  // variance per unit normalized signal
  double read_sigma = 0.0;  // stddev, normalized-signal units
  std::string label = "long";
};

inline NoiseModel default_long_noise() { return {0.003, 0.01, "long"}; }
inline NoiseModel default_short_noise() { return {0.012, 0.04, "short"}; }

void validate(const NoiseModel& m);

// x -> max(x + n, 0), n ~ N(0, shot_coeff*x + read_sigma^2), elementwise.
// Each plane draws from its own substream (derive_seed(seed, plane index)),
// so planes can be generated independently; identical seeds give bitwise
// identical output.
PackedRaw add_noise(const PackedRaw& clean, const NoiseModel& model,
                    std::uint64_t seed);

// In-place single-plane variant used by the pipeline internals.
void add_noise_plane(std::vector<double>& plane, const NoiseModel& model,
                     std::uint64_t stream_seed);

// JSON loaders. Noise config schema:
//   {"shot_coeff": <variance per unit signal>, "read_sigma": <stddev>,
//    "label": "long"|"short"}
// Sensor config schema mirrors SensorParams field names, all in the units
// documented above.
NoiseModel noise_model_from_json(const std::string& json_text);
SensorParams sensor_params_from_json(const std::string& json_text);

}  // namespace rawhdr

#endif  // RAWHDR_SENSOR_HPP_
