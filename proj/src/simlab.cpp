#include "welrci/simlab.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "welrci/parallel.hpp"

namespace welrci {

MethodSpec parse_method(const std::string& name) {
  std::string s;
  for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  MethodSpec m;
  if (s == "qbpci") {
    m.kind = MethodSpec::Kind::qbpci;
    return m;
  }
  if (s == "sqbpci") {
    m.kind = MethodSpec::Kind::sqbpci;
    return m;
  }
  if (s.size() > 2 && s[1] == '-' && s[0] >= '0' && s[0] <= '4') {
    m.k = s[0] - '0';
    s = s.substr(2);
  }
  if (s == "welrci") {
    m.kind = MethodSpec::Kind::welrci;
    return m;
  }
  if (s == "welrci0") {
    m.kind = MethodSpec::Kind::welrci0;
    return m;
  }
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::string method_name(const MethodSpec& m, Scheme scheme) {
  switch (m.kind) {
    case MethodSpec::Kind::qbpci: return "QBPCI";
    case MethodSpec::Kind::sqbpci: return "SQBPCI";
    default: break;
  }
  int k = m.k >= 0 ? m.k : select_order(scheme);
  std::string base = m.kind == MethodSpec::Kind::welrci ? "-WELRCI" : "-WELRCI0";
  return std::to_string(k) + base;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    auto b = cur.find_first_not_of(" \t");
    auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

void apply_key(StudyConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "preset") {
    cfg.preset = value;
    cfg.gen = preset_params(value);
  } else if (key == "scheme") {
    cfg.gen.scheme = parse_scheme(value);
  } else if (key == "lifetime") {
    if (value == "exponential" || value == "exp") cfg.gen.lifetime = Lifetime::exponential;
    else if (value == "chisq1") cfg.gen.lifetime = Lifetime::chisq1;
    else throw std::invalid_argument("lifetime must be exponential or chisq1");
  } else if (key == "lifetime_mean") {
    cfg.gen.lifetime_mean = std::stod(value);
  } else if (key == "censor_mean") {
    cfg.gen.censor_mean = std::stod(value);
  } else if (key == "doubly_scale") {
    cfg.gen.doubly_scale = std::stod(value);
  } else if (key == "doubly_shift") {
    cfg.gen.doubly_shift = std::stod(value);
  } else if (key == "interval2_gap_mean") {
    cfg.gen.interval2_gap_mean = std::stod(value);
  } else if (key == "n") {
    cfg.n = std::stoi(value);
  } else if (key == "q") {
    cfg.qs.clear();
    for (const auto& t : split_list(value)) cfg.qs.push_back(std::stod(t));
  } else if (key == "alpha") {
    cfg.alpha = std::stod(value);
  } else if (key == "methods") {
    cfg.methods.clear();
    for (const auto& t : split_list(value)) cfg.methods.push_back(parse_method(t));
  } else if (key == "reps") {
    cfg.reps = std::stoi(value);
  } else if (key == "B") {
    cfg.B = std::stoi(value);
  } else if (key == "d") {
    cfg.d = std::stoi(value);
  } else if (key == "seed") {
    cfg.seed = std::stoull(value);
  } else if (key == "em_tol") {
    cfg.em_tol = std::stod(value);
  } else if (key == "em_max_iter") {
    cfg.em_max_iter = std::stoi(value);
  } else if (key == "threads") {
    cfg.threads = static_cast<unsigned>(std::stoul(value));
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

void validate(const StudyConfig& cfg) {
  if (cfg.reps < 1) throw std::invalid_argument("reps must be at least 1");
  if (cfg.qs.empty()) throw std::invalid_argument("no quantile levels");
  for (double q : cfg.qs)
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q outside (0,1)");
  if (cfg.methods.empty()) throw std::invalid_argument("no methods");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw std::invalid_argument("alpha outside (0,1)");
}

}  // namespace

StudyConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  StudyConfig cfg;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      auto b = line.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) continue;
      throw std::runtime_error("config line " + std::to_string(row) + ": expected key = value");
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) return std::string();
      auto e = s.find_last_not_of(" \t\r\n");
      return s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("config line " + std::to_string(row) + ": empty key");
    try {
      apply_key(cfg, key, value);
    } catch (const std::exception& e) {
      throw std::runtime_error("config line " + std::to_string(row) + ": " + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

TrialOutcome run_trial(const StudyConfig& cfg, int trial_index) {
  auto nq = cfg.qs.size();
  auto nm = cfg.methods.size();
  TrialOutcome out;
  out.hit.assign(nq, std::vector<int>(nm, -1));
  out.len.assign(nq, std::vector<double>(nm, 0.0));

  auto t = static_cast<std::uint64_t>(trial_index);
  CensoredSample sample = generate(cfg.gen, cfg.n, substream(cfg.seed, {t}));
  bool root_n = convergence_rate(sample.scheme).exponent == 0.5;

  for (std::size_t qi = 0; qi < nq; ++qi) {
    double q = cfg.qs[qi];
    double theta0 = true_quantile(cfg.gen, q);
    for (std::size_t mi = 0; mi < nm; ++mi) {
      const MethodSpec& ms = cfg.methods[mi];
      std::uint64_t seed_m = substream(cfg.seed, {t, static_cast<std::uint64_t>(qi),
                                                  static_cast<std::uint64_t>(mi)});
      try {
        double x_l, x_u;
        if (ms.kind == MethodSpec::Kind::qbpci || ms.kind == MethodSpec::Kind::sqbpci) {
          auto pci = bootstrap_percentile_ci(sample, q, cfg.alpha, cfg.B, seed_m,
                                             ms.kind == MethodSpec::Kind::sqbpci, cfg.em_tol,
                                             cfg.em_max_iter);
          x_l = pci.lo;
          x_u = pci.hi;
        } else {
          bool smoothed = ms.kind == MethodSpec::Kind::welrci;
          int k = ms.k >= 0 ? ms.k : select_order(sample.scheme);
          CalibrationResult cal =
              root_n ? calibrate_n_of_n(sample, q, cfg.alpha, k, cfg.B, seed_m, smoothed,
                                        cfg.em_tol, cfg.em_max_iter)
                     : calibrate_m_of_n(sample, q, cfg.alpha, k, cfg.B, cfg.d, seed_m, smoothed,
                                        cfg.em_tol, cfg.em_max_iter);
          DiscreteDistribution dist = fit_npmle(sample, cfg.em_tol, cfg.em_max_iter).first;
          ConfidenceInterval ci = welrci(dist, q, cal.c_n, smoothed);
          x_l = ci.x_l;
          x_u = ci.x_u;
        }
        out.hit[qi][mi] = (x_l <= theta0 && theta0 <= x_u) ? 1 : 0;
        out.len[qi][mi] = x_u - x_l;
      } catch (const std::exception&) {
        out.hit[qi][mi] = -1;
      }
    }
  }
  return out;
}

StudyReport run_study(const StudyConfig& cfg) {
  validate(cfg);
  auto start = std::chrono::steady_clock::now();
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.reps));
  parallel_for(
      static_cast<std::size_t>(cfg.reps),
      [&](std::size_t i) { outcomes[i] = run_trial(cfg, static_cast<int>(i)); }, cfg.threads);

  auto nq = cfg.qs.size();
  auto nm = cfg.methods.size();
  StudyReport rep;
  rep.cells.assign(nq, std::vector<CellReport>(nm));
  for (std::size_t qi = 0; qi < nq; ++qi) {
    for (std::size_t mi = 0; mi < nm; ++mi) {
      auto& cell = rep.cells[qi][mi];
      double sum = 0.0, sum2 = 0.0;
      int hits = 0;
      for (const auto& o : outcomes) {
        if (o.hit[qi][mi] < 0) {
          ++cell.invalid;
          continue;
        }
        ++cell.valid;
        hits += o.hit[qi][mi];
        sum += o.len[qi][mi];
        sum2 += o.len[qi][mi] * o.len[qi][mi];
      }
      if (cell.valid > 0) {
        cell.coverage_pct = 100.0 * hits / cell.valid;
        cell.avg_length = sum / cell.valid;
        if (cell.valid > 1) {
          double var = (sum2 - sum * sum / cell.valid) / (cell.valid - 1);
          cell.sd_length = std::sqrt(std::max(0.0, var));
        }
      }
      if (cell.invalid * 10 > cfg.reps) rep.flagged = true;
    }
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string report_csv(const StudyConfig& cfg, const StudyReport& rep) {
  std::ostringstream os;
  os << "q,method,coverage_pct,avg_length,sd_length,valid,invalid\n";
  for (std::size_t qi = 0; qi < cfg.qs.size(); ++qi)
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      const auto& c = rep.cells[qi][mi];
      os << cfg.qs[qi] << ',' << method_name(cfg.methods[mi], cfg.gen.scheme) << ','
         << c.coverage_pct << ',' << c.avg_length << ',' << c.sd_length << ',' << c.valid << ','
         << c.invalid << '\n';
    }
  return os.str();
}

std::string report_json(const StudyConfig& cfg, const StudyReport& rep) {
  nlohmann::json j;
  j["config"] = {{"preset", cfg.preset},
                 {"scheme", scheme_name(cfg.gen.scheme)},
                 {"n", cfg.n},
                 {"alpha", cfg.alpha},
                 {"reps", cfg.reps},
                 {"B", cfg.B},
                 {"d", cfg.d},
                 {"seed", cfg.seed},
                 {"q", cfg.qs}};
  std::vector<std::string> names;
  names.reserve(cfg.methods.size());
  for (const auto& m : cfg.methods) names.push_back(method_name(m, cfg.gen.scheme));
  j["config"]["methods"] = names;
  j["cells"] = nlohmann::json::array();
  for (std::size_t qi = 0; qi < cfg.qs.size(); ++qi)
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      const auto& c = rep.cells[qi][mi];
      j["cells"].push_back({{"q", cfg.qs[qi]},
                            {"method", names[mi]},
                            {"coverage_pct", c.coverage_pct},
                            {"avg_length", c.avg_length},
                            {"sd_length", c.sd_length},
                            {"valid", c.valid},
                            {"invalid", c.invalid}});
    }
  j["wall_seconds"] = rep.wall_seconds;
  j["flagged"] = rep.flagged;
  return j.dump(2);
}

}  // namespace welrci
