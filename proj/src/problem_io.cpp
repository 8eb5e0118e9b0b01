#include "conekit/problem_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace conekit {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

Vec vec_from_json(const json& j, const std::string& what) {
  if (!j.is_array())
    throw std::invalid_argument(what + ": expected an array of numbers");
  Vec v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number())
      throw std::invalid_argument(what + ": expected an array of numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

const char* status_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Ok: return "ok";
    case SolveStatus::NoConverge: return "no-converge";
    case SolveStatus::RegularitySuspect: return "regularity-suspect";
  }
  return "?";
}

ordered_json record_to_json(const IterateRecord& r, bool with_vectors) {
  ordered_json j;
  j["k"] = r.k;
  j["stationarity"] = r.stationarity;
  j["feasibility"] = r.feasibility;
  j["complementarity"] = r.complementarity;
  j["dual_feasibility"] = r.dual_feasibility;
  j["phi"] = r.phi;
  j["inner_iters"] = r.inner_iters;
  if (with_vectors) {
    j["x"] = r.x;
    j["lambda"] = r.lambda;
  }
  return j;
}

ordered_json trace_to_json(const std::vector<IterateRecord>& trace, bool with_vectors) {
  ordered_json arr = ordered_json::array();
  for (const IterateRecord& r : trace) arr.push_back(record_to_json(r, with_vectors));
  return arr;
}

// Cone descriptor mini-parser: name ':' integer, or product(list).
struct DescParser {
  const std::string& s;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("cone descriptor \"" + s + "\": " + msg);
  }

  Cone parse_one() {
    skip();
    const size_t start = pos;
    while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
    const std::string name = s.substr(start, pos - start);
    if (name.empty()) fail("expected a cone name at position " + std::to_string(start));
    skip();
    if (name == "product") {
      if (pos >= s.size() || s[pos] != '(') fail("expected '(' after product");
      ++pos;
      std::vector<Cone> parts;
      while (true) {
        parts.push_back(parse_one());
        skip();
        if (pos < s.size() && s[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < s.size() && s[pos] == ')') {
          ++pos;
          break;
        }
        fail("expected ',' or ')' in product list");
      }
      return Cone::product(std::move(parts));
    }
    if (pos >= s.size() || s[pos] != ':') fail("expected ':' after \"" + name + "\"");
    ++pos;
    skip();
    const size_t dstart = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (dstart == pos) fail("expected a positive integer after ':'");
    const int v = std::stoi(s.substr(dstart, pos - dstart));
    if (name == "zero") return Cone::zero(v);
    if (name == "nonpos") return Cone::nonpos(v);
    if (name == "lorentz") return Cone::lorentz(v);
    if (name == "psd") return Cone::psd(v);
    fail("unknown cone \"" + name + "\"");
  }
};

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        ok = true;
        break;
      }
    if (!ok) throw std::invalid_argument(what + ": unknown field \"" + it.key() + "\"");
  }
}

}  // namespace

Cone cone_from_json(const json& j) {
  if (j.is_string()) return parse_cone_descriptor(j.get<std::string>());
  if (!j.is_object())
    throw std::invalid_argument("cone: expected an object or a descriptor string");
  if (!j.contains("type") || !j.at("type").is_string())
    throw std::invalid_argument("cone: missing string field \"type\"");
  const std::string type = j.at("type").get<std::string>();
  auto int_field = [&](const char* name) {
    if (!j.contains(name) || !j.at(name).is_number_integer())
      throw std::invalid_argument("cone type \"" + type + "\": missing integer field \"" +
                                  name + "\"");
    return j.at(name).get<int>();
  };
  if (type == "zero" || type == "nonpos" || type == "lorentz") {
    check_keys(j, {"type", "dim"}, "cone type \"" + type + "\"");
    const int d = int_field("dim");
    if (type == "zero") return Cone::zero(d);
    if (type == "nonpos") return Cone::nonpos(d);
    return Cone::lorentz(d);
  }
  if (type == "psd") {
    check_keys(j, {"type", "order"}, "cone type \"psd\"");
    return Cone::psd(int_field("order"));
  }
  if (type == "product") {
    check_keys(j, {"type", "parts"}, "cone type \"product\"");
    if (!j.contains("parts") || !j.at("parts").is_array() || j.at("parts").empty())
      throw std::invalid_argument("cone type \"product\": missing non-empty array \"parts\"");
    std::vector<Cone> parts;
    for (const auto& part : j.at("parts")) parts.push_back(cone_from_json(part));
    return Cone::product(std::move(parts));
  }
  throw std::invalid_argument("cone: unknown type \"" + type + "\"");
}

ordered_json cone_to_json(const Cone& k) {
  ordered_json j;
  switch (k.kind()) {
    case ConeKind::Zero:
      j["type"] = "zero";
      j["dim"] = k.dim();
      break;
    case ConeKind::Nonpos:
      j["type"] = "nonpos";
      j["dim"] = k.dim();
      break;
    case ConeKind::Lorentz:
      j["type"] = "lorentz";
      j["dim"] = k.dim();
      break;
    case ConeKind::Psd:
      j["type"] = "psd";
      j["order"] = k.order();
      break;
    case ConeKind::Product: {
      j["type"] = "product";
      ordered_json parts = ordered_json::array();
      for (const Cone& part : k.parts()) parts.push_back(cone_to_json(part));
      j["parts"] = std::move(parts);
      break;
    }
  }
  return j;
}

Cone parse_cone_descriptor(const std::string& text) {
  DescParser p{text};
  Cone k = p.parse_one();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing characters");
  return k;
}

std::string cone_descriptor(const Cone& k) { return k.describe(); }

Problem problem_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("problem: expected a JSON object");
  check_keys(j,
             {"name", "n", "objective", "constraints", "cone", "known_solution",
              "known_multiplier", "x0", "delta"},
             "problem");
  Problem p;
  if (j.contains("name")) {
    if (!j.at("name").is_string())
      throw std::invalid_argument("problem: \"name\" must be a string");
    p.name = j.at("name").get<std::string>();
  }
  if (!j.contains("n") || !j.at("n").is_number_integer())
    throw std::invalid_argument("problem: missing integer field \"n\"");
  p.n = j.at("n").get<int>();
  if (p.n < 1) throw std::invalid_argument("problem: \"n\" must be >= 1");
  if (!j.contains("objective") || !j.at("objective").is_string())
    throw std::invalid_argument("problem: missing string field \"objective\"");
  if (!j.contains("constraints") || !j.at("constraints").is_array() ||
      j.at("constraints").empty())
    throw std::invalid_argument("problem: missing non-empty array \"constraints\"");
  if (!j.contains("cone")) throw std::invalid_argument("problem: missing field \"cone\"");

  try {
    p.objective = parse(j.at("objective").get<std::string>(), p.n);
  } catch (const ParseError& e) {
    throw std::invalid_argument("problem: objective: " + std::string(e.what()));
  }
  size_t ci = 0;
  for (const auto& c : j.at("constraints")) {
    if (!c.is_string())
      throw std::invalid_argument("problem: \"constraints\" must be an array of strings");
    try {
      p.constraints.push_back(parse(c.get<std::string>(), p.n));
    } catch (const ParseError& e) {
      throw std::invalid_argument("problem: constraint " + std::to_string(ci + 1) + ": " +
                                  std::string(e.what()));
    }
    ++ci;
  }
  p.cone = cone_from_json(j.at("cone"));
  if (j.contains("known_solution"))
    p.known_solution = vec_from_json(j.at("known_solution"), "problem: known_solution");
  if (j.contains("known_multiplier"))
    p.known_multiplier = vec_from_json(j.at("known_multiplier"), "problem: known_multiplier");
  if (j.contains("x0")) p.x0 = vec_from_json(j.at("x0"), "problem: x0");
  if (j.contains("delta")) {
    if (!j.at("delta").is_number())
      throw std::invalid_argument("problem: \"delta\" must be a number");
    p.delta = j.at("delta").get<double>();
    if (*p.delta <= 0.0) throw std::invalid_argument("problem: \"delta\" must be positive");
  }
  p.validate();
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  try {
    return problem_from_json(j);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

Vec parse_number_list(const std::string& text) {
  Vec v;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    size_t used = 0;
    double val = 0.0;
    try {
      val = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("expected a comma-separated list of numbers, got \"" +
                                  text + "\"");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size())
      throw std::invalid_argument("expected a comma-separated list of numbers, got \"" +
                                  text + "\"");
    v.push_back(val);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ordered_json kkt_to_json(const KktReport& r) {
  ordered_json j;
  j["stationarity"] = r.stationarity;
  j["feasibility"] = r.feasibility;
  j["complementarity"] = r.complementarity;
  j["dual_feasibility"] = r.dual_feasibility;
  j["tol"] = r.tol;
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  return j;
}

ordered_json regularity_to_json(const RegularityReport& r) {
  ordered_json j;
  j["mode"] = r.mode;
  if (r.mode == "licq")
    j["min_singular_value"] = r.min_singular_value;
  else
    j["certificate_value"] = r.certificate_value;
  j["verdict"] = r.verdict;
  j["note"] = r.note;
  return j;
}

ordered_json solve_to_json(const SolveResult& r) {
  ordered_json j;
  j["status"] = status_string(r.status);
  j["message"] = r.message;
  j["x"] = r.x;
  j["lambda"] = r.lambda;
  j["kkt"] = kkt_to_json(r.kkt);
  j["trace"] = trace_to_json(r.trace, false);
  return j;
}

ordered_json replay_to_json(const ReplayResult& r) {
  ordered_json j;
  j["interior_ok"] = r.interior_ok;
  j["multiplier_divergence"] = r.multiplier_divergence;
  j["schedule_truncated"] = r.schedule_truncated;
  j["message"] = r.message;
  if (!r.trace.empty()) {
    j["x"] = r.trace.back().x;
    j["lambda"] = r.trace.back().lambda;
  }
  j["trace"] = trace_to_json(r.trace, true);
  return j;
}

ordered_json cone_battery_to_json(const ConeBatteryReport& r) {
  ordered_json j;
  j["cone"] = r.cone;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["max_recon"] = r.max_recon;
  j["max_orth"] = r.max_orth;
  j["max_characterization"] = r.max_characterization;
  j["max_idempotence"] = r.max_idempotence;
  j["max_homogeneity"] = r.max_homogeneity;
  j["max_lipschitz_excess"] = r.max_lipschitz_excess;
  j["max_grad_rel_err"] = r.max_grad_rel_err;
  j["pass"] = r.pass();
  return j;
}

ordered_json penalty_grad_to_json(const PenaltyGradReport& r) {
  ordered_json j;
  j["cone"] = r.cone;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["max_rel_err"] = r.max_rel_err;
  j["pass"] = r.pass();
  return j;
}

ordered_json grad_battery_to_json(const GradBatteryReport& r) {
  ordered_json j;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["max_rel_err"] = r.max_rel_err;
  j["worst_expr"] = r.worst_expr;
  j["pass"] = r.pass();
  return j;
}

void write_trace_csv(const std::string& path, const std::vector<IterateRecord>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file for writing: " + path);
  out << "k,stationarity,feasibility,complementarity,dual_feasibility,phi,inner_iters\n";
  for (const IterateRecord& r : trace) {
    out << format_double(r.k) << ',' << format_double(r.stationarity) << ','
        << format_double(r.feasibility) << ',' << format_double(r.complementarity) << ','
        << format_double(r.dual_feasibility) << ',' << format_double(r.phi) << ','
        << r.inner_iters << '\n';
  }
  if (!out) throw std::runtime_error("failed writing trace file: " + path);
}

void write_trace_sidecar(const std::string& csv_path,
                         const std::vector<IterateRecord>& trace) {
  const std::string path = csv_path + ".json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace sidecar for writing: " + path);
  ordered_json j;
  j["iterates"] = trace_to_json(trace, true);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing trace sidecar: " + path);
}

}  // namespace conekit
