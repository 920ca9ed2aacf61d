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

#include "rawhdr/sensor.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "rawhdr/rng.hpp"

namespace rawhdr {

void validate(const SensorParams& p) {
  const bool positive = p.analog_gain > 0 && p.digital_gain > 0 &&
                        p.exposure_time > 0 && p.spatial_response > 0 &&
                        p.area > 0 && p.charge_coeff > 0 && p.quant_step > 0;
  if (!positive || p.offset_voltage < 0)
    throw ParameterError("sensor parameters must be strictly positive "
                         "(offset voltage may be zero)");
}

double sensor_response(double scene_irradiance, const SensorParams& p) {
  validate(p);
  if (!(scene_irradiance >= 0) || !std::isfinite(scene_irradiance))
    throw ParameterError("scene irradiance must be finite and non-negative");
  const double electrons = p.analog_gain * p.exposure_time *
                           p.spatial_response * p.area * p.charge_coeff *
                           scene_irradiance;
  return (electrons + p.offset_voltage) / p.quant_step * p.digital_gain;
}

std::vector<double> sensor_response(const std::vector<double>& scene_irradiance,
                                    const SensorParams& p) {
  std::vector<double> out(scene_irradiance.size());
  for (std::size_t i = 0; i < scene_irradiance.size(); ++i)
    out[i] = sensor_response(scene_irradiance[i], p);
  return out;
}

void validate(const NoiseModel& m) {
  if (m.shot_coeff < 0 || m.read_sigma < 0)
    throw ParameterError("noise variance parameters must be non-negative");
}

void add_noise_plane(std::vector<double>& plane, const NoiseModel& model,
                     std::uint64_t stream_seed) {
  validate(model);
  if (model.shot_coeff == 0.0 && model.read_sigma == 0.0) return;
  GaussianSampler gauss(stream_seed);
  const double read_var = model.read_sigma * model.read_sigma;
  for (double& x : plane) {
    const double sigma = std::sqrt(model.shot_coeff * x + read_var);
    x = std::max(x + sigma * gauss.next(), 0.0);
  }
}

PackedRaw add_noise(const PackedRaw& clean, const NoiseModel& model,
                    std::uint64_t seed) {
  validate(model);
  for (const auto& plane : clean.ch)
    for (double v : plane)
      if (!(v >= 0))
        throw ValidationError("add_noise input must be non-negative");
  PackedRaw out = clean;
  for (int c = 0; c < 4; ++c)
    add_noise_plane(out.ch[c], model, derive_seed(seed, static_cast<std::uint64_t>(c)));
  return out;
}

NoiseModel noise_model_from_json(const std::string& json_text) {
  NoiseModel m;
  try {
    const auto j = nlohmann::json::parse(json_text);
    m.shot_coeff = j.at("shot_coeff").get<double>();
    m.read_sigma = j.at("read_sigma").get<double>();
    if (j.contains("label")) m.label = j.at("label").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad noise model config: ") + e.what());
  }
  validate(m);
  return m;
}

SensorParams sensor_params_from_json(const std::string& json_text) {
  SensorParams p;
  try {
    const auto j = nlohmann::json::parse(json_text);
    p.analog_gain = j.value("analog_gain", p.analog_gain);
    p.digital_gain = j.value("digital_gain", p.digital_gain);
    p.exposure_time = j.value("exposure_time", p.exposure_time);
    p.spatial_response = j.value("spatial_response", p.spatial_response);
    p.area = j.value("area", p.area);
    p.charge_coeff = j.value("charge_coeff", p.charge_coeff);
    p.offset_voltage = j.value("offset_voltage", p.offset_voltage);
    p.quant_step = j.value("quant_step", p.quant_step);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad sensor config: ") + e.what());
  }
  validate(p);
  return p;
}

}  // namespace rawhdr
