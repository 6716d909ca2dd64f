#include "welrci/censoring.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "welrci/mathutil.hpp"

namespace welrci {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(trim(cur));
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

[[noreturn]] void row_error(int row, const std::string& msg) {
  throw std::runtime_error("row " + std::to_string(row) + ": " + msg);
}

double parse_real(const std::string& s, int row, const std::string& field) {
  std::size_t pos = 0;
  double x;
  try {
    x = std::stod(s, &pos);
  } catch (const std::exception&) {
    row_error(row, "cannot parse " + field + " from '" + s + "'");
  }
  if (pos != s.size()) row_error(row, "trailing characters in " + field + " '" + s + "'");
  if (!std::isfinite(x)) row_error(row, field + " is not finite");
  if (x < 0.0) row_error(row, field + " is negative");
  return x;
}

int parse_int(const std::string& s, int row, const std::string& field) {
  std::size_t pos = 0;
  long x;
  try {
    x = std::stol(s, &pos);
  } catch (const std::exception&) {
    row_error(row, "cannot parse " + field + " from '" + s + "'");
  }
  if (pos != s.size()) row_error(row, "trailing characters in " + field + " '" + s + "'");
  return static_cast<int>(x);
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) return true;
  }
  return false;
}

}  // namespace

Scheme parse_scheme(const std::string& name) {
  if (name == "right") return Scheme::right;
  if (name == "doubly") return Scheme::doubly;
  if (name == "interval1") return Scheme::interval1;
  if (name == "interval2") return Scheme::interval2;
  if (name == "partly1") return Scheme::partly1;
  if (name == "partly-general" || name == "partly_general") return Scheme::partly_general;
  if (name == "none") return Scheme::none;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::right: return "right";
    case Scheme::doubly: return "doubly";
    case Scheme::interval1: return "interval1";
    case Scheme::interval2: return "interval2";
    case Scheme::partly1: return "partly1";
    case Scheme::partly_general: return "partly-general";
    case Scheme::none: return "none";
  }
  return "?";
}

namespace {

const char* expected_header(Scheme s) {
  switch (s) {
    case Scheme::right:
    case Scheme::doubly: return "v,delta";
    case Scheme::interval1: return "y,delta";
    case Scheme::interval2: return "y,z,delta";
    case Scheme::partly1: return "kind,x_or_y,delta";
    case Scheme::partly_general: return "grid,...";
    case Scheme::none: return "v";
  }
  return "?";
}

void parse_unified_rows(std::istream& in, CensoredSample& s, int& row) {
  std::string line;
  while (next_line(in, line)) {
    ++row;
    auto f = split(line, ',');
    if (f.size() != 2) row_error(row, "expected left,right");
    double left = parse_real(f[0], row, "left");
    CensoringInterval ci;
    if (f[1].empty()) {
      ci = {left, kInf, false};
    } else {
      double right = parse_real(f[1], row, "right");
      if (right < left) row_error(row, "right end below left end");
      ci = {left, right, right == left};
    }
    s.direct.push_back(ci);
  }
}

}  // namespace

CensoredSample parse_sample(std::istream& in, Scheme scheme) {
  CensoredSample s;
  s.scheme = scheme;
  std::string line;
  int row = 1;
  if (!next_line(in, line)) throw std::runtime_error("row 1: empty input");
  auto header = split(line, ',');

  if (scheme == Scheme::partly_general) {
    if (header.size() != 2 || header[0] != "grid") row_error(1, "expected grid,y1;y2;...;yN");
    auto gs = split(header[1], ';');
    if (gs.empty()) row_error(1, "empty grid");
    for (const auto& g : gs) {
      double y = parse_real(g, 1, "grid point");
      if (!s.grid.empty() && y <= s.grid.back()) row_error(1, "grid not strictly increasing");
      s.grid.push_back(y);
    }
    int ncell = static_cast<int>(s.grid.size()) + 1;
    while (next_line(in, line)) {
      ++row;
      auto f = split(line, ',');
      if (f.size() != 2) row_error(row, "expected kind,value");
      if (f[0] == "exact") {
        s.kind.push_back(0);
        s.v.push_back(parse_real(f[1], row, "x"));
        s.delta.push_back(1);
      } else if (f[0] == "cell") {
        int j = parse_int(f[1], row, "cell index");
        if (j < 1 || j > ncell) row_error(row, "cell index outside 1.." + std::to_string(ncell));
        s.kind.push_back(1);
        s.v.push_back(0.0);
        s.delta.push_back(j);
      } else {
        row_error(row, "kind must be exact or cell");
      }
    }
    if (s.n() < 1) throw std::runtime_error("no observations");
    return s;
  }

  std::string joined;
  for (std::size_t i = 0; i < header.size(); ++i) joined += (i ? "," : "") + header[i];
  bool unified = joined == "left,right";
  if (!unified && joined != expected_header(scheme))
    row_error(1, "header '" + joined + "' does not match " + expected_header(scheme) +
                     " (or unified left,right)");
  if (unified) {
    parse_unified_rows(in, s, row);
    if (s.n() < 1) throw std::runtime_error("no observations");
    return s;
  }

  while (next_line(in, line)) {
    ++row;
    auto f = split(line, ',');
    switch (scheme) {
      case Scheme::right:
      case Scheme::doubly: {
        if (f.size() != 2) row_error(row, "expected v,delta");
        double v = parse_real(f[0], row, "v");
        int d = parse_int(f[1], row, "delta");
        bool ok = scheme == Scheme::right ? (d == 0 || d == 1) : (d >= 1 && d <= 3);
        if (!ok) row_error(row, "delta " + std::to_string(d) + " outside allowed set");
        s.v.push_back(v);
        s.delta.push_back(d);
        break;
      }
      case Scheme::interval1: {
        if (f.size() != 2) row_error(row, "expected y,delta");
        double y = parse_real(f[0], row, "y");
        int d = parse_int(f[1], row, "delta");
        if (d != 0 && d != 1) row_error(row, "delta " + std::to_string(d) + " outside allowed set");
        s.v.push_back(y);
        s.delta.push_back(d);
        break;
      }
      case Scheme::interval2: {
        if (f.size() != 3) row_error(row, "expected y,z,delta");
        double y = parse_real(f[0], row, "y");
        double z = parse_real(f[1], row, "z");
        int d = parse_int(f[2], row, "delta");
        if (d < 1 || d > 3) row_error(row, "delta " + std::to_string(d) + " outside allowed set");
        if (z >= y) row_error(row, "z must be strictly below y");
        s.v.push_back(y);
        s.z.push_back(z);
        s.delta.push_back(d);
        break;
      }
      case Scheme::partly1: {
        if (f.size() != 3) row_error(row, "expected kind,x_or_y,delta");
        if (f[0] == "exact") {
          s.kind.push_back(0);
          s.v.push_back(parse_real(f[1], row, "x"));
          s.delta.push_back(f[2].empty() ? 1 : parse_int(f[2], row, "delta"));
        } else if (f[0] == "cs") {
          int d = parse_int(f[2], row, "delta");
          if (d != 0 && d != 1) row_error(row, "delta " + std::to_string(d) + " outside allowed set");
          s.kind.push_back(1);
          s.v.push_back(parse_real(f[1], row, "y"));
          s.delta.push_back(d);
        } else {
          row_error(row, "kind must be exact or cs");
        }
        break;
      }
      case Scheme::none: {
        if (f.size() != 1) row_error(row, "expected single value v");
        s.v.push_back(parse_real(f[0], row, "v"));
        s.delta.push_back(1);
        break;
      }
      case Scheme::partly_general: break;
    }
  }
  if (s.n() < 1) throw std::runtime_error("no observations");
  return s;
}

CensoredSample load_csv(const std::string& path, Scheme scheme) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_sample(in, scheme);
}

std::vector<CensoringInterval> to_intervals(const CensoredSample& s) {
  if (!s.direct.empty()) return s.direct;
  std::vector<CensoringInterval> out;
  out.reserve(s.v.size());
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    double v = s.v[i];
    int d = s.delta[i];
    switch (s.scheme) {
      case Scheme::none:
        out.push_back({v, v, true});
        break;
      case Scheme::right:
        out.push_back(d == 1 ? CensoringInterval{v, v, true} : CensoringInterval{v, kInf, false});
        break;
      case Scheme::doubly:
        if (d == 1) out.push_back({v, v, true});
        else if (d == 2) out.push_back({v, kInf, false});
        else out.push_back({0.0, v, false});
        break;
      case Scheme::interval1:
        out.push_back(d == 1 ? CensoringInterval{0.0, v, false} : CensoringInterval{v, kInf, false});
        break;
      case Scheme::interval2:
        if (d == 1) out.push_back({s.z[i], v, false});
        else if (d == 2) out.push_back({v, kInf, false});
        else out.push_back({0.0, s.z[i], false});
        break;
      case Scheme::partly1:
        if (s.kind[i] == 0) out.push_back({v, v, true});
        else out.push_back(d == 1 ? CensoringInterval{0.0, v, false}
                                  : CensoringInterval{v, kInf, false});
        break;
      case Scheme::partly_general:
        if (s.kind[i] == 0) {
          out.push_back({v, v, true});
        } else {
          int j = d;
          double lo = j == 1 ? 0.0 : s.grid[static_cast<std::size_t>(j) - 2];
          double hi = j == static_cast<int>(s.grid.size()) + 1 ? kInf
                                                               : s.grid[static_cast<std::size_t>(j) - 1];
          out.push_back({lo, hi, false});
        }
        break;
    }
  }
  return out;
}

CensoredSample resample(const CensoredSample& s, const std::vector<int>& idx) {
  CensoredSample out;
  out.scheme = s.scheme;
  out.grid = s.grid;
  for (int i : idx) {
    auto u = static_cast<std::size_t>(i);
    if (!s.direct.empty()) {
      out.direct.push_back(s.direct[u]);
      continue;
    }
    out.v.push_back(s.v[u]);
    out.delta.push_back(s.delta[u]);
    if (!s.z.empty()) out.z.push_back(s.z[u]);
    if (!s.kind.empty()) out.kind.push_back(s.kind[u]);
  }
  return out;
}

bool is_preset(const std::string& name) {
  return name == "table1" || name == "table2" || name == "table3" || name == "table4" ||
         name == "table5";
}

GeneratorParams preset_params(const std::string& name) {
  GeneratorParams p;
  if (name == "table1") {
    p.scheme = Scheme::right;
  } else if (name == "table2") {
    p.scheme = Scheme::right;
    p.lifetime = Lifetime::chisq1;
  } else if (name == "table3") {
    p.scheme = Scheme::doubly;
  } else if (name == "table4") {
    p.scheme = Scheme::doubly;
    p.lifetime = Lifetime::chisq1;
  } else if (name == "table5") {
    p.scheme = Scheme::interval1;
    p.censor_mean = 1.0;
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return p;
}

namespace {

double draw_lifetime(const GeneratorParams& p, Rng& rng) {
  return p.lifetime == Lifetime::exponential ? rng.exponential(p.lifetime_mean) : rng.chisq1();
}

}  // namespace

CensoredSample generate(const GeneratorParams& params, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate: n < 1");
  Rng rng(seed);
  CensoredSample s;
  s.scheme = params.scheme;
  s.v.reserve(static_cast<std::size_t>(n));
  s.delta.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = draw_lifetime(params, rng);
    switch (params.scheme) {
      case Scheme::none:
        s.v.push_back(x);
        s.delta.push_back(1);
        break;
      case Scheme::right: {
        double y = rng.exponential(params.censor_mean);
        s.v.push_back(std::min(x, y));
        s.delta.push_back(x <= y ? 1 : 0);
        break;
      }
      case Scheme::doubly: {
        double y = rng.exponential(params.censor_mean);
        double z = params.doubly_scale * y + params.doubly_shift;
        if (x > y) {
          s.v.push_back(y);
          s.delta.push_back(2);
        } else if (x <= z) {
          s.v.push_back(z);
          s.delta.push_back(3);
        } else {
          s.v.push_back(x);
          s.delta.push_back(1);
        }
        break;
      }
      case Scheme::interval1: {
        double y = rng.exponential(params.censor_mean);
        s.v.push_back(y);
        s.delta.push_back(x <= y ? 1 : 0);
        break;
      }
      case Scheme::interval2: {
        double z = rng.exponential(params.censor_mean);
        double y = z + rng.exponential(params.interval2_gap_mean);
        s.v.push_back(y);
        s.z.push_back(z);
        if (x <= z) s.delta.push_back(3);
        else if (x > y) s.delta.push_back(2);
        else s.delta.push_back(1);
        break;
      }
      case Scheme::partly1:
      case Scheme::partly_general:
        throw std::invalid_argument("no generator for scheme " + scheme_name(params.scheme));
    }
  }
  return s;
}

double true_quantile(const GeneratorParams& params, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("true_quantile: q outside (0,1)");
  if (params.lifetime == Lifetime::exponential) return -params.lifetime_mean * std::log1p(-q);
  return chisq1_quantile(q);
}

}  // namespace welrci
