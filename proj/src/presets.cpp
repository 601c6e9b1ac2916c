#include "hqmap/presets.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "hqmap/errors.hpp"
#include "hqmap/types.hpp"

namespace hqmap {
namespace {

using nlohmann::json;

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

// "a=0.5,b=1" -> {a: 0.5, b: 1}
std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("preset parameter \"" + item + "\" is not key=value");
    std::size_t used = 0;
    double v = 0.0;
    const auto value = item.substr(eq + 1);
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw InputError("preset parameter \"" + item + "\" has a bad value");
    out[item.substr(0, eq)] = v;
  }
  return out;
}

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void reject_unknown(const std::map<std::string, double>& p, std::initializer_list<const char*> allowed,
                    const std::string& name) {
  for (const auto& [k, v] : p) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw InputError("preset " + name + ": unknown parameter \"" + k + "\"");
  }
}

json nonqc_values() {
  constexpr int kSamples = 1024;
  json values = json::array();
  for (int j = 0; j < kSamples; ++j) {
    const double t = kTwoPi * j / kSamples;
    const double a = t - std::sin(t);
    values.push_back({std::cos(a), std::sin(a)});
  }
  return values;
}

json load_json(const std::string& text) {
  try {
    if (!text.empty() && text.front() == '{') return json::parse(text);
    std::ifstream in(text);
    if (!in) return json();
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

Preset expand_preset(const std::string& text) {
  std::string name = text;
  std::string args;
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    name = text.substr(0, colon);
    args = text.substr(colon + 1);
  } else if (const auto us = text.find('_'); us != std::string::npos) {
    // affine_a0.5 style: name_<key><value>
    name = text.substr(0, us);
    const auto rest = text.substr(us + 1);
    std::size_t split = 0;
    while (split < rest.size() && std::isalpha(static_cast<unsigned char>(rest[split]))) ++split;
    args = rest.substr(0, split) + "=" + rest.substr(split);
  }
  const auto p = parse_params(args);
  Preset out;
  if (name == "circle") {
    reject_unknown(p, {"r"}, name);
    const double r = param(p, "r", 1.0);
    out = {"circle", "curve", "circle of radius r", json{{"type", "circle"}, {"r", r}}};
    if (r != 1.0) out.name += ":r=" + format_number(r);
  } else if (name == "identity") {
    reject_unknown(p, {}, name);
    out = {"identity", "map", "identity map of the unit disk",
           json{{"type", "trig"}, {"coeffs", json::array({json::array({1, 1.0, 0.0})})}}};
  } else if (name == "ellipse") {
    reject_unknown(p, {"a", "b"}, name);
    const double a = param(p, "a", 2.0);
    const double b = param(p, "b", 1.0);
    out = {"ellipse:a=" + format_number(a) + ",b=" + format_number(b), "curve", "ellipse with semi-axes a, b",
           json{{"type", "ellipse"}, {"a", a}, {"b", b}}};
  } else if (name == "affine") {
    reject_unknown(p, {"a"}, name);
    const double a = param(p, "a", 0.5);
    out = {"affine:a=" + format_number(a), "map", "affine map z + a conj(z) onto an ellipse",
           json{{"type", "trig"}, {"coeffs", json::array({json::array({1, 1.0, 0.0}), json::array({-1, a, 0.0})})}}};
  } else if (name == "quadratic") {
    reject_unknown(p, {"b"}, name);
    const double b = param(p, "b", 0.25);
    out = {"quadratic:b=" + format_number(b), "map", "harmonic map z + b conj(z^2)",
           json{{"type", "trig"}, {"coeffs", json::array({json::array({1, 1.0, 0.0}), json::array({-2, b, 0.0})})}}};
  } else if (name == "nonqc") {
    reject_unknown(p, {}, name);
    out = {"nonqc", "map", "boundary map e^{i(t - sin t)} with a critical point at t = 0 (not q.c.)",
           json{{"type", "samples"}, {"values", nonqc_values()}}};
  } else if (name == "star") {
    reject_unknown(p, {"m", "eps", "p"}, name);
    const double m = param(p, "m", 5.0);
    const double eps = param(p, "eps", 0.1);
    const double pw = param(p, "p", 1.5);
    if (m != std::floor(m) || m < 1.0) throw InputError("preset star: m must be a positive integer");
    out = {"star:m=" + format_number(m) + ",eps=" + format_number(eps) + ",p=" + format_number(pw), "curve",
           "star r = 1 + eps |sin(m t/2)|^p with a power-law tangent modulus",
           json{{"type", "star"}, {"m", static_cast<int>(m)}, {"eps", eps}, {"p", pw}}};
  } else {
    throw InputError("unknown preset \"" + text + "\"");
  }
  return out;
}

std::vector<Preset> presets() {
  std::vector<Preset> out;
  for (const char* n : {"circle", "identity", "ellipse", "affine", "quadratic", "nonqc", "star"}) {
    out.push_back(expand_preset(n));
  }
  return out;
}

json resolve_map_spec(const std::string& text) {
  auto spec = load_json(text);
  if (spec.is_null()) {
    const auto p = expand_preset(text);
    if (p.kind == "map") return p.spec;
    return json{{"type", "composed"}, {"curve", p.spec}, {"correspondence", "identity"}};
  }
  if (spec.contains("type") && spec["type"].is_string()) {
    const auto t = spec["type"].get<std::string>();
    if (t != "trig" && t != "samples" && t != "composed") {
      return json{{"type", "composed"}, {"curve", spec}, {"correspondence", "identity"}};
    }
  }
  return spec;
}

json resolve_curve_spec(const std::string& text) {
  auto spec = load_json(text);
  if (spec.is_null()) spec = expand_preset(text).spec;
  if (!spec.is_object() || !spec.contains("type")) throw InputError("curve spec: expected an object with a type");
  const auto t = spec["type"].get<std::string>();
  if (t == "trig") return json{{"type", "fourier"}, {"coeffs", spec["coeffs"]}};
  if (t == "samples") return json{{"type", "samples"}, {"points", spec["values"]}, {"interpolation", "spline"}};
  if (t == "composed") return spec["curve"];
  return spec;
}

}  // namespace hqmap
