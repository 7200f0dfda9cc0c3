#include "zeromode/potential_json.hpp"

#include <string>

#include "zeromode/errors.hpp"

namespace zeromode {

namespace {

using nlohmann::json;

double number(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParameterError(std::string("missing parameter '") + key + "'");
  if (!it->is_number()) throw ParameterError(std::string("parameter '") + key + "' must be a number");
  return it->get<double>();
}

std::vector<double> numbers(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParameterError(std::string("missing parameter '") + key + "'");
  if (!it->is_array()) throw ParameterError(std::string("parameter '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) throw ParameterError(std::string("parameter '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

json to_json(const PotentialSpec& spec) {
  json params = json::object();
  double t = 0.0;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, OneSolitonParams>) {
          params["eta"] = p.eta;
        } else if constexpr (std::is_same_v<P, TwoSolitonParams>) {
          params["eta1"] = p.eta1;
          params["eta2"] = p.eta2;
          params["eps1"] = p.eps1;
          params["eps2"] = p.eps2;
        } else if constexpr (std::is_same_v<P, NSolitonParams>) {
          params["etas"] = p.etas;
          params["d0s"] = p.d0s;
          t = p.t;
        } else if constexpr (std::is_same_v<P, PeriodicOneGapParams>) {
          params["a"] = p.a;
          params["b"] = p.b;
          params["c"] = p.c;
        } else if constexpr (std::is_same_v<P, PeriodicCnParams>) {
          params["m"] = p.modulus.value();
          params["a"] = p.a;
        } else if constexpr (std::is_same_v<P, CombinedParams>) {
          params["alpha"] = p.alpha;
          params["beta"] = p.beta;
          params["eta"] = p.eta;
        } else {
          params["value"] = p.value;
          if (p.period) params["period"] = *p.period;
        }
      },
      spec.params());
  json doc = {{"family", std::string(family_name(spec.family()))}, {"params", params}, {"t", t}};
  if (spec.sign() != 1.0) doc["sign"] = spec.sign();
  if (spec.shift() != 0.0) doc["shift"] = spec.shift();
  return doc;
}

PotentialSpec spec_from_json(const json& doc) {
  if (!doc.is_object()) throw ParameterError("potential spec must be a JSON object");
  const auto fam = doc.find("family");
  if (fam == doc.end() || !fam->is_string()) throw ParameterError("potential spec needs a 'family' string");
  const json params = doc.value("params", json::object());
  if (!params.is_object()) throw ParameterError("'params' must be an object");
  const double t = doc.contains("t") ? number(doc, "t") : 0.0;

  PotentialSpec spec = [&] {
    switch (family_from_name(fam->get<std::string>())) {
      case Family::OneSoliton:
        return one_soliton(number(params, "eta"));
      case Family::TwoSoliton:
        return two_soliton({number(params, "eta1"), number(params, "eta2"), number(params, "eps1"),
                            number(params, "eps2")});
      case Family::NSoliton: {
        if (!params.contains("d0s")) return n_soliton(NSolitonParams::centered(numbers(params, "etas"), t));
        return n_soliton({numbers(params, "etas"), numbers(params, "d0s"), t});
      }
      case Family::PeriodicOneGap:
        return periodic_one_gap(
            PeriodicOneGapParams::make(number(params, "a"), number(params, "b"), number(params, "c")));
      case Family::PeriodicCn:
        return periodic_cn(elliptic::EllipticModulus(number(params, "m")), number(params, "a"));
      case Family::CombinedOneSoliton:
        return combined_one_soliton({number(params, "alpha"), number(params, "beta"), number(params, "eta")});
      case Family::Constant: {
        std::optional<double> period;
        if (params.contains("period")) period = number(params, "period");
        return constant_potential(params.contains("value") ? number(params, "value") : 0.0, period);
      }
    }
    throw ParameterError("unhandled family");
  }();

  if (doc.contains("sign")) {
    const double s = number(doc, "sign");
    if (s != 1.0 && s != -1.0) throw ParameterError("'sign' must be +1 or -1");
    if (s < 0.0) spec = spec.negated();
  }
  if (doc.contains("shift")) spec = spec.shifted(number(doc, "shift"));
  return spec;
}

}  // namespace zeromode
