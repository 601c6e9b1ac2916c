#include "hqmap/boundary_spec.hpp"

#include <string>
#include <vector>

#include "hqmap/curve_spec.hpp"
#include "hqmap/errors.hpp"

namespace hqmap {
namespace {

double number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string("map spec: expected a number for ") + what);
  return j.get<double>();
}

}  // namespace

std::shared_ptr<const BoundarySource> boundary_from_json(const nlohmann::json& spec, std::size_t target_samples) {
  if (!spec.is_object() || !spec.contains("type") || !spec["type"].is_string()) {
    throw InputError("map spec: expected an object with a string \"type\"");
  }
  const auto type = spec["type"].get<std::string>();
  if (type == "trig") {
    if (!spec.contains("coeffs") || !spec["coeffs"].is_array()) throw InputError("trig map: missing coeffs");
    std::vector<TrigTerm> terms;
    for (const auto& c : spec["coeffs"]) {
      if (!c.is_array() || c.size() != 3) throw InputError("trig map: each coefficient is [n, re, im]");
      const double n = number(c[0], "frequency");
      if (n != static_cast<double>(static_cast<long>(n))) throw InputError("trig map: frequency must be an integer");
      terms.push_back({static_cast<long>(n), Complex(number(c[1], "re"), number(c[2], "im"))});
    }
    return make_trig_boundary(std::move(terms), target_samples);
  }
  if (type == "samples") {
    if (!spec.contains("values") || !spec["values"].is_array()) throw InputError("samples map: missing values");
    std::vector<Complex> values;
    for (const auto& v : spec["values"]) {
      if (!v.is_array() || v.size() != 2) throw InputError("samples map: each value is [re, im]");
      values.emplace_back(number(v[0], "re"), number(v[1], "im"));
    }
    return make_sampled_boundary(values, target_samples);
  }
  if (type == "composed") {
    if (!spec.contains("curve")) throw InputError("composed map: missing curve");
    const auto kind = spec.value("correspondence", std::string("identity"));
    Correspondence c;
    if (kind == "identity") {
      c = Correspondence::identity;
    } else if (kind == "sampled") {
      c = Correspondence::native;
    } else {
      throw InputError("composed map: correspondence must be identity or sampled");
    }
    auto curve = std::make_shared<const JordanCurve>(curve_from_json(spec["curve"], target_samples));
    return make_curve_boundary(std::move(curve), c);
  }
  throw InputError("map spec: unknown type \"" + type + "\"");
}

}  // namespace hqmap
