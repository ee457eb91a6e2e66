#include "ballprob/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ballprob/errors.hpp"

namespace ballprob {

namespace {

using nlohmann::json;

std::vector<double> as_doubles(const json& arr, const char* what) {
  if (!arr.is_array()) {
    throw DomainError(std::string(what) + " must be a JSON array");
  }
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number()) {
      throw DomainError(std::string(what) + " must contain numbers only");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Instance parse_instance(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("instance: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("instance: expected a JSON object");

  Instance inst;
  if (j.contains("matrix")) {
    const auto& m = j.at("matrix");
    if (!m.is_array() || m.empty()) {
      throw DomainError("instance: matrix must be a non-empty array of rows");
    }
    const std::size_t n = m.size();
    Eigen::MatrixXd mat(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> row = as_doubles(m[i], "matrix row");
      if (row.size() != n) {
        throw DomainError("instance: matrix must be square");
      }
      for (std::size_t k = 0; k < n; ++k) mat(static_cast<Eigen::Index>(i),
                                              static_cast<Eigen::Index>(k)) = row[k];
    }
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    if (j.contains("shift")) {
      const std::vector<double> sv = as_doubles(j.at("shift"), "shift");
      if (sv.size() != n) {
        throw DomainError("instance: shift length must match the matrix");
      }
      for (std::size_t i = 0; i < n; ++i) shift(static_cast<Eigen::Index>(i)) = sv[i];
    }
    MatrixSpectrum ms = spectrum_of_matrix(mat, shift);
    inst.spectrum = std::move(ms.spectrum);
    inst.shift = std::move(ms.shift);
    inst.matrix = std::move(mat);
    inst.raw_shift = std::move(shift);
    return inst;
  }

  if (!j.contains("spectrum")) {
    throw DomainError("instance: needs a \"spectrum\" or \"matrix\" field");
  }
  std::vector<double> lam = as_doubles(j.at("spectrum"), "spectrum");
  std::vector<double> shift;
  if (j.contains("shift")) shift = as_doubles(j.at("shift"), "shift");
  if (shift.size() < lam.size()) shift.resize(lam.size(), 0.0);
  // Sort (eigenvalue, shift) pairs together so unsorted input keeps its
  // shift alignment.
  std::vector<std::size_t> idx(lam.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return lam[a] > lam[b]; });
  std::vector<double> lam_sorted(lam.size());
  std::vector<double> shift_sorted(shift.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    lam_sorted[i] = lam[idx[i]];
    shift_sorted[i] = shift[idx[i]];
  }
  for (std::size_t i = idx.size(); i < shift.size(); ++i) {
    shift_sorted[i] = shift[i];  // entries beyond the spectrum keep order
  }
  inst.spectrum = Spectrum(std::move(lam_sorted));
  inst.shift = std::move(shift_sorted);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open instance file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_instance(ss.str());
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

JsonWriter& JsonWriter::begin() {
  out_ = "{";
  first_ = true;
  return *this;
}

void JsonWriter::comma() {
  if (!first_) out_ += ",";
  first_ = false;
}

JsonWriter& JsonWriter::field(const std::string& key, double v) {
  comma();
  out_ += "\"" + key + "\":";
  if (std::isfinite(v)) {
    out_ += fmt17(v);
  } else {
    out_ += v > 0 ? "\"inf\"" : (v < 0 ? "\"-inf\"" : "\"nan\"");
  }
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, const std::string& v) {
  comma();
  out_ += "\"" + key + "\":\"" + v + "\"";
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, bool v) {
  comma();
  out_ += "\"" + key + "\":" + (v ? "true" : "false");
  return *this;
}

JsonWriter& JsonWriter::field_raw(const std::string& key,
                                  const std::string& raw) {
  comma();
  out_ += "\"" + key + "\":" + raw;
  return *this;
}

JsonWriter& JsonWriter::end() {
  out_ += "}";
  return *this;
}

namespace {

std::string kv_object(const std::vector<std::pair<std::string, double>>& kv) {
  JsonWriter w;
  w.begin();
  for (const auto& [k, v] : kv) w.field(k, v);
  w.end();
  return w.str();
}

}  // namespace

std::string to_json(const BoundReport& r) {
  JsonWriter w;
  w.begin()
      .field("formula_id", r.formula_id)
      .field("value", r.value)
      .field_raw("ingredients", kv_object(r.ingredients))
      .field("condition_ok", r.condition_ok)
      .end();
  return w.str();
}

std::string to_json(const ExperimentRecord& r) {
  JsonWriter w;
  w.begin()
      .field("name", r.name)
      .field_raw("inputs", kv_object(r.inputs))
      .field("observed", r.observed)
      .field("reference", r.reference)
      .field("verdict", std::string(r.pass ? "pass" : "fail"));
  if (!r.extras.empty()) w.field_raw("extras", kv_object(r.extras));
  w.end();
  return w.str();
}

std::string to_json(const ComparisonResult& r) {
  JsonWriter w;
  w.begin()
      .field("distance", r.distance)
      .field("argmax_x", r.argmax_x)
      .field_raw("bound", to_json(r.bound))
      .field("ratio", r.ratio)
      .end();
  return w.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "instance_id,regime_x,regime_y,distance,bound,ratio\n";
  for (const auto& row : rows) {
    out += std::to_string(row.instance_id);
    out += ",";
    out += regime_name(row.regime_x);
    out += ",";
    out += regime_name(row.regime_y);
    out += ",";
    out += fmt17(row.result.distance);
    out += ",";
    out += fmt17(row.result.bound.value);
    out += ",";
    out += fmt17(row.result.ratio);
    out += "\n";
  }
  return out;
}

}  // namespace ballprob
