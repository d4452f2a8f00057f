#include "parfell/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "parfell/error.hpp"

namespace parfell::io {

namespace {

template <class T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw MalformedInput(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("field '") + key + "': " + e.what());
  }
}

Complex parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw MalformedInput("complex numbers are written as [re, im]");
}

Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

GroupElement parse_element(const Json& j, const GroupSpec& g) {
  if (j.is_string()) return g.parse(j.get<std::string>());
  if (j.is_number_unsigned() && g.is_finite()) {
    const auto idx = j.get<std::size_t>();
    if (idx >= g.order()) throw MalformedInput("element index out of range");
    return GroupElement::from_index(idx);
  }
  throw MalformedInput("group elements are written as strings");
}

Json violations_to_json(const std::vector<Violation>& ws) {
  Json out = Json::array();
  for (const auto& w : ws) {
    Json v{{"axiom", w.axiom}, {"s", w.s}, {"t", w.t}};
    if (w.point >= 0) v["point"] = w.point;
    if (!w.detail.empty()) v["detail"] = w.detail;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

GroupSpec parse_group(const Json& j) {
  if (j.is_string()) return parse_group_template(j.get<std::string>());
  const auto kind = get<std::string>(j, "kind");
  if (kind == "free") return GroupSpec::free(get<int>(j, "rank"));
  if (kind == "finite") {
    auto table = get<std::vector<std::vector<std::size_t>>>(j, "table");
    if (j.contains("order") && get<std::size_t>(j, "order") != table.size())
      throw MalformedInput("group order does not match the table");
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = get<std::vector<std::string>>(j, "labels");
    return GroupSpec::finite(std::move(table), std::move(labels));
  }
  if (kind == "cyclic") return GroupSpec::cyclic(get<std::size_t>(j, "order"));
  if (kind == "symmetric") return GroupSpec::symmetric(get<std::size_t>(j, "degree"));
  throw MalformedInput("unknown group kind '" + kind + "'");
}

Json group_to_json(const GroupSpec& g) {
  if (g.is_free()) return Json{{"kind", "free"}, {"rank", g.rank()}};
  return Json{{"kind", "finite"}, {"order", g.order()}, {"table", g.table()}, {"labels", g.labels()}};
}

FinitePartialAction parse_action(const Json& j) {
  if (!j.is_object()) throw MalformedInput("partial action must be a JSON object");
  const GroupSpec group = parse_group(j.contains("group") ? j.at("group") : Json());
  const auto n = get<std::size_t>(j, "n");
  if (n == 0 || n > 4096) throw MalformedInput("n must be between 1 and 4096");
  std::map<GroupElement, ElementData> data;
  if (!j.contains("elements") || !j.at("elements").is_array()) throw MalformedInput("missing 'elements' array");
  for (const auto& ej : j.at("elements")) {
    const GroupElement t = parse_element(ej.contains("t") ? ej.at("t") : Json(), group);
    ElementData d{get<std::vector<int>>(ej, "domain"), PartialMap::empty(n)};
    if (!ej.contains("map") || !ej.at("map").is_object()) throw MalformedInput("element map must be an object");
    for (const auto& [key, value] : ej.at("map").items()) {
      std::size_t pos = 0;
      int from = -1;
      try {
        from = std::stoi(key, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != key.size() || from < 0 || static_cast<std::size_t>(from) >= n || !value.is_number_integer())
        throw MalformedInput("bad map entry '" + key + "' for element '" + group.format(t) + "'");
      d.map.image[static_cast<std::size_t>(from)] = value.get<int>();
      if (d.map.image[static_cast<std::size_t>(from)] < 0) throw MalformedInput("map values must be points of Z");
    }
    if (!data.emplace(t, std::move(d)).second) throw MalformedInput("element '" + group.format(t) + "' declared twice");
  }
  return FinitePartialAction(group, n, std::move(data));
}

Json action_to_json(const FinitePartialAction& a) {
  Json elems = Json::array();
  for (const auto& [t, d] : a.declared()) {
    Json map = Json::object();
    for (std::size_t z = 0; z < d.map.size(); ++z)
      if (d.map.image[z] >= 0) map[std::to_string(z)] = d.map.image[z];
    elems.push_back(Json{{"t", a.group().format(t)}, {"domain", d.domain}, {"map", map}});
  }
  return Json{{"group", group_to_json(a.group())}, {"n", a.size()}, {"elements", elems}};
}

GroupHom parse_hom(const Json& j, const GroupSpec& source) {
  const GroupSpec target = parse_group(j.contains("target") ? j.at("target") : Json());
  if (!target.is_finite()) throw MalformedInput("hom target must be finite");
  if (!j.contains("images") || !j.at("images").is_array()) throw MalformedInput("missing 'images' array");
  std::vector<std::size_t> images;
  for (const auto& im : j.at("images")) images.push_back(parse_element(im, target).index());
  return GroupHom(source, target, std::move(images));
}

Json hom_to_json(const GroupHom& h) {
  Json images = Json::array();
  for (std::size_t i : h.images()) images.push_back(h.target().labels().at(i));
  return Json{{"target", group_to_json(h.target())}, {"images", images}};
}

Section parse_section(const Json& j, const GroupSpec& group, std::size_t n) {
  if (!j.contains("terms") || !j.at("terms").is_array()) throw MalformedInput("missing 'terms' array");
  Section x;
  for (const auto& tj : j.at("terms")) {
    const GroupElement t = parse_element(tj.contains("t") ? tj.at("t") : Json(), group);
    if (!tj.contains("coeffs") || !tj.at("coeffs").is_array() || tj.at("coeffs").size() != n)
      throw MalformedInput("section coefficients must list n values");
    Function f;
    for (const auto& c : tj.at("coeffs")) f.push_back(parse_complex(c));
    auto [it, fresh] = x.terms.try_emplace(t, Function(n, 0.0));
    for (std::size_t z = 0; z < n; ++z) it->second[z] += f[z];
  }
  return x;
}

Json section_to_json(const Section& x, const GroupSpec& group) {
  Json terms = Json::array();
  for (const auto& [t, f] : x.terms) {
    Json coeffs = Json::array();
    for (const auto& c : f) coeffs.push_back(complex_to_json(c));
    terms.push_back(Json{{"t", group.format(t)}, {"coeffs", coeffs}});
  }
  return Json{{"terms", terms}};
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix parse_matrix(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw MalformedInput("matrix must be a nonempty array of rows");
  ComplexMatrix m(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != m.cols()) throw MalformedInput("ragged matrix");
    for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = parse_complex(j[i][k]);
  }
  if (!m.all_finite()) throw MalformedInput("matrix has non-finite entries");
  return m;
}

PartialRepFamily parse_family(const Json& j, const GroupSpec& group) {
  PartialRepFamily v{group, get<std::size_t>(j, "dim"), {}};
  if (!j.contains("matrices") || !j.at("matrices").is_array()) throw MalformedInput("missing 'matrices' array");
  for (const auto& mj : j.at("matrices")) {
    const GroupElement t = parse_element(mj.contains("t") ? mj.at("t") : Json(), group);
    ComplexMatrix m = parse_matrix(mj.contains("entries") ? mj.at("entries") : Json());
    if (m.rows() != v.dim || m.cols() != v.dim) throw MalformedInput("family matrix has wrong size");
    if (!v.v.emplace(t, std::move(m)).second) throw MalformedInput("family lists an element twice");
  }
  v.v.try_emplace(group.identity(), ComplexMatrix::identity(v.dim));
  return v;
}

Json family_to_json(const PartialRepFamily& v) {
  Json ms = Json::array();
  for (const auto& [t, m] : v.v) ms.push_back(Json{{"t", v.group.format(t)}, {"entries", matrix_to_json(m)}});
  return Json{{"dim", v.dim}, {"matrices", ms}};
}

Json defects_to_json(const DefectReport& r) {
  Json entries = Json::object();
  for (const auto& [name, e] : r.entries) {
    Json w{{"value", e.value}};
    if (!e.s.empty()) w["s"] = e.s;
    if (!e.t.empty()) w["t"] = e.t;
    if (e.point >= 0) w["point"] = e.point;
    entries[name] = std::move(w);
  }
  Json skipped = Json::array();
  for (const auto& [s, t] : r.skipped) skipped.push_back(Json::array({s, t}));
  return Json{{"entries", entries}, {"max", r.max()}, {"skipped_pairs", skipped.size()}};
}

Json validation_to_json(const ValidationReport& r) {
  return Json{{"valid", r.valid()},
              {"elements_checked", r.elements_checked},
              {"pairs_checked", r.pairs_checked},
              {"violations", r.counts},
              {"witnesses", violations_to_json(r.witnesses)}};
}

Json certificate_to_json(const RfdCertificate& c) {
  Json j{{"valid", c.valid},
         {"delta", c.delta},
         {"N", c.depth},
         {"tail_bound", c.tail_bound},
         {"window_distance", c.window_distance},
         {"density_bound", c.density_bound},
         {"hom", c.hom ? hom_to_json(*c.hom) : Json()},
         {"target", c.target},
         {"action_valid", c.action_valid},
         {"equivariance_defect", c.equivariance_defect},
         {"points_checked", c.points_checked},
         {"quotient_points", c.quotient_points},
         {"candidates_tried", c.candidates_tried}};
  if (!c.reason.empty()) j["reason"] = c.reason;
  return j;
}

Json perturbation_to_json(const PerturbationCertificate& c, const GroupSpec& group) {
  Json per = Json::object();
  for (const auto& [t, d] : c.distance) per[group.format(t)] = d;
  Json entries{{"distance_bound", Json{{"value", c.max_distance}, {"bound", c.distance_bound()}}},
               {"selfadjoint", Json{{"value", c.adjoint_defect}, {"bound", c.adjoint_bound()}}},
               {"triple_product", Json{{"value", c.triple_defect}, {"bound", c.triple_bound()}}},
               {"isometry_gap", Json{{"value", c.max_isometry_defect}, {"bound", 1e-10}}}};
  if (c.covariance_defect)
    entries["covariance"] = Json{{"value", *c.covariance_defect}, {"bound", c.covariance_bound()}};
  return Json{{"eta", c.eta},
              {"norm_constant", c.norm_constant},
              {"holds", c.holds()},
              {"entries", entries},
              {"distance", per},
              {"skipped_pairs", c.skipped_pairs}};
}

Json bundle_report_to_json(const BundleAxiomReport& r) {
  Json ws = Json::array();
  for (const auto& w : r.witnesses)
    ws.push_back(Json{{"axiom", w.axiom}, {"s", w.s}, {"t", w.t}, {"trial", w.trial}, {"excess", w.excess}});
  return Json{{"ok", r.ok()},       {"trials", r.trials}, {"tolerance", r.tolerance},
              {"violations", r.counts}, {"worst", r.worst}, {"witnesses", ws}};
}

Json tolerances_to_json(const Tolerances& t) {
  return Json{{"axiom_tol", t.axiom}, {"exact_tol", t.exact}, {"norm_tol", t.norm}, {"spectral_tol", t.spectral}};
}

Json read_json_file(const std::string& path, std::string* raw) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (raw) *raw = text;
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace parfell::io
