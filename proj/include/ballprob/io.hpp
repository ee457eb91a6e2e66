#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ballprob/analysis.hpp"
#include "ballprob/bounds.hpp"
#include "ballprob/metrics.hpp"
#include "ballprob/spectrum.hpp"

namespace ballprob {

/// Parsed {"spectrum": [...], "shift": [...]} or {"matrix": [[...]], "shift":
/// [...]} instance. A matrix instance also carries its eigendecomposition as
/// (spectrum, shift-in-eigenbasis) so every consumer can work spectrally.
struct Instance {
  Spectrum spectrum;
  std::vector<double> shift;  // aligned with the (sorted) spectrum
  std::optional<Eigen::MatrixXd> matrix;
  std::optional<Eigen::VectorXd> raw_shift;  // original basis, matrix input
};

/// Parses an instance from JSON text. Spectrum entries may come unsorted;
/// (eigenvalue, shift) pairs are sorted together. Throws DomainError on
/// malformed input.
Instance parse_instance(const std::string& json_text);

/// parse_instance over a file's contents.
Instance load_instance(const std::string& path);

// --- deterministic emission -------------------------------------------------
// All floating-point output is printed with 17 significant digits so byte
// comparisons of result files are exact across runs.

std::string fmt17(double v);

/// Tiny ordered-key JSON writer (numbers via fmt17).
class JsonWriter {
 public:
  JsonWriter& begin();
  JsonWriter& field(const std::string& key, double v);
  JsonWriter& field(const std::string& key, const std::string& v);
  JsonWriter& field(const std::string& key, bool v);
  JsonWriter& field_raw(const std::string& key, const std::string& raw);
  JsonWriter& end();
  const std::string& str() const { return out_; }

 private:
  void comma();
  std::string out_;
  bool first_ = true;
};

std::string to_json(const BoundReport& r);
std::string to_json(const ExperimentRecord& r);
std::string to_json(const ComparisonResult& r);

/// CSV rows (instance_id, regime_x, regime_y, distance, bound, ratio) with a
/// header line.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace ballprob
