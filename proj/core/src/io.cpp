#include "liqsched/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace liqsched {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

PatternKind parse_kind(std::string text) {
  std::ranges::transform(text, text.begin(), [](unsigned char c) { return std::tolower(c); });
  std::erase(text, '_');
  std::erase(text, '-');
  if (text == "atomic") return PatternKind::Atomic;
  if (text == "piecewiseconstant") return PatternKind::PiecewiseConstant;
  throw IoError("unknown pattern kind '" + text + "'");
}

double to_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw IoError("trailing characters in " + what);
    return v;
  } catch (const IoError&) {
    throw;
  } catch (const std::exception&) {
    throw IoError("could not parse " + what + " from '" + text + "'");
  }
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return out.str();
}

void write_output(const std::string& output_path, const std::string& content) {
  if (output_path.empty() || output_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + output_path + "' for writing");
  out << content;
  if (!out) throw IoError("error while writing '" + output_path + "'");
}

RawPattern parse_pattern_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("pattern JSON parse error: ") + e.what());
  }
  try {
    RawPattern raw;
    raw.kind = parse_kind(doc.at("kind").get<std::string>());
    raw.times = doc.at("times").get<std::vector<double>>();
    raw.depth = doc.at("depth").get<std::vector<double>>();
    raw.resilience = doc.at("resilience").get<std::vector<double>>();
    raw.horizon = doc.at("horizon").get<double>();
    raw.eta0 = doc.value("eta0", 0.0);
    raw.target = doc.value("target", 1.0);
    return raw;
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(std::string("pattern JSON is missing fields: ") + e.what());
  }
}

RawPattern parse_pattern_csv(const std::string& text) {
  RawPattern raw;
  raw.kind = PatternKind::PiecewiseConstant;
  bool have_horizon = false;
  bool header_seen = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string meta = trim(line.substr(1));
      const auto eq = meta.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(meta.substr(0, eq));
      const std::string value = trim(meta.substr(eq + 1));
      if (key == "kind") {
        raw.kind = parse_kind(value);
      } else if (key == "horizon") {
        raw.horizon = to_number(value, "horizon");
        have_horizon = true;
      } else if (key == "eta0") {
        raw.eta0 = to_number(value, "eta0");
      } else if (key == "target") {
        raw.target = to_number(value, "target");
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;  // time,depth,resilience
      continue;
    }
    std::istringstream row(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(row, field, ',')) values.push_back(to_number(trim(field), "csv field"));
    if (values.size() != 3) throw IoError("pattern CSV rows need time,depth,resilience");
    raw.times.push_back(values[0]);
    raw.depth.push_back(values[1]);
    raw.resilience.push_back(values[2]);
  }
  if (raw.times.empty()) throw IoError("pattern CSV contains no rows");
  if (!have_horizon) raw.horizon = raw.times.back();
  return raw;
}

RawPattern load_pattern(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return parse_pattern_csv(text);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return parse_pattern_json(text);
  const std::string trimmed = trim(text);
  if (!trimmed.empty() && trimmed.front() == '{') return parse_pattern_json(text);
  return parse_pattern_csv(text);
}

Schedule load_schedule(const std::string& path) {
  const std::string text = read_file(path);
  const std::string trimmed = trim(text);
  Schedule sched;
  if (!trimmed.empty() && trimmed.front() == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const std::exception& e) {
      throw IoError(std::string("schedule JSON parse error: ") + e.what());
    }
    if (doc.contains("path")) {
      sched.times = doc["path"].at("t").get<std::vector<double>>();
      sched.path = doc["path"].at("x").get<std::vector<double>>();
    }
    if (doc.contains("atoms")) {
      for (const auto& atom : doc["atoms"]) {
        sched.atoms.push_back({atom.at("t").get<double>(), atom.at("size").get<double>()});
      }
    }
    if (sched.times.empty()) {
      // Build the path from the atoms alone.
      std::ranges::sort(sched.atoms, {}, &TradeAtom::t);
      double x = 0.0;
      for (const auto& atom : sched.atoms) {
        x += atom.size;
        sched.times.push_back(atom.t);
        sched.path.push_back(x);
      }
    }
  } else {
    // CSV: uses the t and X columns; the schedule series CSV works directly.
    std::istringstream in(text);
    std::string line;
    int t_col = 0;
    int x_col = 1;
    bool header_seen = false;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line.front() == '#') continue;
      std::vector<std::string> fields;
      std::istringstream row(line);
      std::string field;
      while (std::getline(row, field, ',')) fields.push_back(trim(field));
      if (!header_seen) {
        header_seen = true;
        for (std::size_t i = 0; i < fields.size(); ++i) {
          if (fields[i] == "t") t_col = static_cast<int>(i);
          if (fields[i] == "X" || fields[i] == "x") x_col = static_cast<int>(i);
        }
        continue;
      }
      if (static_cast<int>(fields.size()) <= std::max(t_col, x_col)) {
        throw IoError("schedule CSV row is too short");
      }
      sched.times.push_back(to_number(fields[static_cast<std::size_t>(t_col)], "t"));
      sched.path.push_back(to_number(fields[static_cast<std::size_t>(x_col)], "X"));
    }
    if (sched.times.empty()) throw IoError("schedule CSV contains no rows");
    double prev = 0.0;
    for (std::size_t i = 0; i < sched.times.size(); ++i) {
      const double dx = sched.path[i] - prev;
      if (dx > 0.0) sched.atoms.push_back({sched.times[i], dx});
      prev = sched.path[i];
    }
  }
  sched.total = sched.path.empty() ? 0.0 : sched.path.back();
  return sched;
}

std::string schedule_to_json(const Schedule& schedule, const CostReport& report) {
  json doc;
  doc["y_star"] = schedule.multiplier;
  doc["total"] = schedule.total;
  doc["cost"] = report.total_cost;
  doc["atoms"] = json::array();
  for (const auto& atom : schedule.atoms) {
    doc["atoms"].push_back({{"t", atom.t}, {"size", atom.size}});
  }
  doc["rates"] = json::array();
  for (const auto& seg : schedule.rates) {
    doc["rates"].push_back({{"t_begin", seg.t_begin},
                            {"t_end", seg.t_end},
                            {"volume", seg.volume},
                            {"rate", seg.rate()}});
  }
  return doc.dump(2) + "\n";
}

std::string cost_report_to_json(const CostReport& report, const std::vector<double>& foc_times,
                                const std::vector<double>& foc_residuals, bool with_foc) {
  json doc;
  doc["total_cost"] = report.total_cost;
  doc["eta0_component"] = report.eta0_component;
  doc["impact_component"] = report.impact_component;
  doc["markup_path"] = {{"t", report.times}, {"eta", report.markup}};
  if (with_foc) {
    doc["y_used"] = report.y_used;
    doc["foc"] = {{"t", foc_times}, {"residual", foc_residuals}};
  }
  return doc.dump(2) + "\n";
}

std::string schedule_series_csv(const LiquidityPattern& pattern, const SampledPattern& sampled,
                                const EnvelopeResult& envelope, const Schedule& schedule,
                                const std::vector<double>& markup) {
  std::ostringstream out;
  out << "t,delta,r,rho,lambda,lambda_tilde,kappa_tilde,frontier,X,eta\n";
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    const double t = sampled.times[i];
    const double r = pattern.resilience()[pattern.cell_index(t)];
    const double lt = i < envelope.lambda_tilde.size() ? envelope.lambda_tilde[i] : 0.0;
    const double kt = i < envelope.kappa_tilde.size() ? envelope.kappa_tilde[i] : 0.0;
    const double x = i < schedule.path.size() ? schedule.path[i] : schedule.total;
    const double eta = i < markup.size() ? markup[i] : 0.0;
    out << fmt(t) << ',' << fmt(sampled.depth[i]) << ',' << fmt(r) << ',' << fmt(sampled.rho[i])
        << ',' << fmt(sampled.lambda[i]) << ',' << fmt(lt) << ',' << fmt(kt) << ','
        << fmt(schedule.frontier.empty() ? 0.0 : schedule.frontier(t)) << ',' << fmt(x) << ','
        << fmt(eta) << '\n';
  }
  return out.str();
}

std::string envelope_series_csv(const EnvelopeResult& envelope) {
  std::ostringstream out;
  out << "k,Lambda_tilde,Lambda_hat,density\n";
  // Piecewise-linear hull evaluation along the curve's own abscissae.
  const auto& hull = envelope.hull;
  std::size_t seg = 1;
  for (const EnvelopePoint& pt : envelope.curve) {
    while (seg + 1 < hull.size() && hull[seg].k < pt.k) ++seg;
    double hat = pt.value;
    if (hull.size() >= 2) {
      const EnvelopePoint& a = hull[seg - 1];
      const EnvelopePoint& b = hull[std::min(seg, hull.size() - 1)];
      hat = b.k > a.k ? a.value + (b.value - a.value) * (pt.k - a.k) / (b.k - a.k) : a.value;
    }
    const double dens = envelope.density.empty() ? 0.0 : envelope.density(pt.k);
    out << fmt(pt.k) << ',' << fmt(pt.value) << ',' << fmt(hat) << ',' << fmt(dens) << '\n';
  }
  return out.str();
}

std::string signal_series_csv(std::span<const double> times, std::span<const double> lstar) {
  std::ostringstream out;
  out << "t,L_star\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    out << fmt(times[i]) << ',' << fmt(lstar[i]) << '\n';
  }
  return out.str();
}

}  // namespace liqsched
