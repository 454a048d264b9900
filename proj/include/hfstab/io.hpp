#pragma once

// JSON and CSV serialization. JSON numbers use the shortest representation
// that reads back to the same double; CSV uses 17 significant digits.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hfstab/collision.hpp"
#include "hfstab/hill.hpp"
#include "hfstab/krein.hpp"
#include "hfstab/traveling_wave.hpp"
#include "hfstab/waves.hpp"

namespace hfstab {

using json = nlohmann::ordered_json;

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json params_json(const ModelParams& p) {
  json j = json::object();
  for (const auto& [k, v] : p.values()) j[k] = v;
  return j;
}

inline json to_json(const CollisionEvent& e) {
  json j;
  j["n1"] = e.first.n;
  j["l1"] = e.first.l;
  j["n2"] = e.second.n;
  j["l2"] = e.second.l;
  j["mu"] = e.mu;
  j["lambda_re"] = e.lambda.real() + 0.0; // no negative zeros in output
  j["lambda_im"] = e.lambda.imag() + 0.0;
  j["at_origin"] = e.at_origin;
  j["residual"] = e.residual;
  j["signature_product"] = e.signature_product;
  j["verdict"] = e.verdict ? json(to_string(*e.verdict)) : json(nullptr);
  return j;
}

inline json to_json(const AnalysisReport& r) {
  json j;
  j["model"] = r.model;
  j["kind"] = r.kind;
  j["N"] = r.N;
  j["branch"] = r.branch;
  j["n_max"] = r.n_max;
  j["speed"] = r.speed;
  j["events"] = json::array();
  for (const auto& e : r.events) j["events"].push_back(to_json(e));
  j["overall"] = r.overall();
  j["counts"] = json::object();
  for (const auto& [k, v] : r.counts) j["counts"][k] = v;
  j["diagnostics"] = json::object();
  for (const auto& [k, v] : r.diagnostics) j["diagnostics"][k] = finite_or_null(v);
  return j;
}

inline json to_json(const TravelingWave& w, const ModelParams& params = {}) {
  json j;
  j["model"] = w.model;
  j["params"] = params_json(params);
  j["period"] = w.period;
  j["c"] = w.c;
  j["amplitude"] = w.amplitude();
  j["mean"] = w.mean();
  j["integration_constant"] = w.integration_constant;
  j["residual"] = w.residual;
  j["resolved"] = wave_resolved(w);
  j["coefficients"] = w.coefficients;
  return j;
}

inline TravelingWave wave_from_json(const json& j) {
  try {
    TravelingWave w;
    w.model = j.at("model").get<std::string>();
    w.c = j.at("c").get<double>();
    w.coefficients = j.at("coefficients").get<std::vector<double>>();
    if (w.coefficients.empty()) throw ConfigError("wave file has no coefficients");
    w.integration_constant = j.value("integration_constant", 0.0);
    w.residual = j.value("residual", 0.0);
    return w;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed wave file: ") + e.what());
  }
}

inline std::string spectrum_csv(const SpectrumSet& s) {
  std::string out = "mu,re_lambda,im_lambda\n";
  for (const auto& slice : s.slices)
    for (const auto& l : slice.eigenvalues)
      out += fmt17(slice.mu) + "," + fmt17(l.real()) + "," + fmt17(l.imag()) + "\n";
  return out;
}

inline json to_json(const Bubble& b, const std::vector<CollisionEvent>& predictions) {
  json j;
  j["center_re"] = b.center.real();
  j["center_im"] = b.center.imag();
  j["max_growth"] = b.max_growth;
  j["mu_min"] = b.mu_min;
  j["mu_max"] = b.mu_max;
  j["im_min"] = b.im_min;
  j["im_max"] = b.im_max;
  j["points"] = b.points;
  j["near_origin"] = b.near_origin;
  if (b.prediction) {
    j["prediction"] = static_cast<int>(*b.prediction);
    j["predicted_lambda_im"] = predictions[*b.prediction].lambda.imag();
    j["prediction_distance"] = b.prediction_distance;
  } else {
    j["prediction"] = nullptr;
    j["predicted_lambda_im"] = nullptr;
    j["prediction_distance"] = nullptr;
  }
  return j;
}

inline std::string curves_csv(const std::vector<CurveSample>& rows) {
  std::string out = "l,n,k,Omega\n";
  for (const auto& r : rows)
    out += std::to_string(r.l) + "," + std::to_string(r.n) + "," + fmt17(r.k) + "," + fmt17(r.Omega) + "\n";
  return out;
}

inline std::string depth_csv(const std::vector<DepthTracePoint>& rows) {
  std::string out = "h,im_lambda,mu\n";
  for (const auto& r : rows) out += fmt17(r.h) + "," + fmt17(r.im_lambda) + "," + fmt17(r.mu) + "\n";
  return out;
}

} // namespace hfstab
