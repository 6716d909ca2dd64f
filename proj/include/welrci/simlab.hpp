#pragma once

#include <string>

#include "welrci/baselines.hpp"
#include "welrci/calibration.hpp"

namespace welrci {

struct MethodSpec {
  enum class Kind { welrci, welrci0, qbpci, sqbpci };
  Kind kind = Kind::welrci;
  int k = -1;  // -1 resolves to the scheme's default order
};

// accepts WELRCI, k-WELRCI, WELRCI0, k-WELRCI0, QBPCI, SQBPCI (case-insensitive)
MethodSpec parse_method(const std::string& name);
std::string method_name(const MethodSpec& m, Scheme scheme);

struct StudyConfig {
  GeneratorParams gen;
  std::string preset;
  int n = 50;
  std::vector<double> qs{0.25, 0.5, 0.75};
  double alpha = 0.10;
  std::vector<MethodSpec> methods{MethodSpec{}};
  int reps = 1000;
  int B = 400;
  int d = 5;
  std::uint64_t seed = 1;
  double em_tol = 1e-3;
  int em_max_iter = 10000;
  unsigned threads = 0;
};

// flat key = value file, '#' comments
StudyConfig parse_config(const std::string& path);

struct TrialOutcome {
  std::vector<std::vector<int>> hit;  // [q][method]: 1 hit, 0 miss, -1 invalid
  std::vector<std::vector<double>> len;
};

TrialOutcome run_trial(const StudyConfig& cfg, int trial_index);

struct CellReport {
  double coverage_pct = 0.0;
  double avg_length = 0.0;
  double sd_length = 0.0;
  int valid = 0;
  int invalid = 0;
};

struct StudyReport {
  std::vector<std::vector<CellReport>> cells;  // [q][method]
  double wall_seconds = 0.0;
  bool flagged = false;
};

StudyReport run_study(const StudyConfig& cfg);

std::string report_csv(const StudyConfig& cfg, const StudyReport& rep);
std::string report_json(const StudyConfig& cfg, const StudyReport& rep);

}  // namespace welrci
