#include "crr/pmf_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "crr/errors.hpp"

namespace crr {

namespace {

double parse_decimal(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw ParseError("empty numeric literal");
  char *end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw ParseError("malformed numeric literal '" + s + "'");
  return v;
}

double mass_value(const nlohmann::json &p) {
  if (p.is_number()) return p.get<double>();
  if (p.is_string()) return parse_mass_literal(p.get<std::string>());
  throw ParseError("mass entry 'p' must be a number or string");
}

std::vector<std::string> string_list(const nlohmann::json &j,
                                     const char *what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto &e : j) {
    if (!e.is_string())
      throw ParseError(std::string(what) + " entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

} // namespace

double parse_mass_literal(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const double num = parse_decimal(text.substr(0, slash));
  const double den = parse_decimal(text.substr(slash + 1));
  if (den == 0.0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

JointPmf pmf_from_json(const nlohmann::json &doc) {
  try {
    if (!doc.is_object() || !doc.contains("variables") || !doc.contains("mass"))
      throw ParseError("pmf document needs 'variables' and 'mass'");
    std::vector<Alphabet> vars;
    for (const auto &v : doc.at("variables")) {
      if (!v.is_object() || !v.contains("name") || !v.contains("symbols"))
        throw ParseError("variable entries need 'name' and 'symbols'");
      vars.emplace_back(v.at("name").get<std::string>(),
                        string_list(v.at("symbols"), "symbols"));
    }
    if (vars.empty()) throw ParseError("pmf has no variables");
    std::size_t cells = 1;
    std::vector<std::size_t> strides(vars.size(), 1);
    for (std::size_t i = vars.size(); i-- > 0;) {
      strides[i] = cells;
      cells *= vars[i].size();
    }
    std::vector<double> mass(cells, 0.0);
    std::vector<bool> seen(cells, false);
    if (!doc.at("mass").is_array()) throw ParseError("'mass' must be an array");
    for (const auto &entry : doc.at("mass")) {
      if (!entry.is_object() || !entry.contains("index") || !entry.contains("p"))
        throw ParseError("mass entries need 'index' and 'p'");
      const auto index = string_list(entry.at("index"), "index");
      if (index.size() != vars.size())
        throw ParseError("mass index has wrong rank");
      std::size_t flat = 0;
      for (std::size_t i = 0; i < index.size(); ++i)
        flat += vars[i].index_of(index[i]) * strides[i];
      if (seen[flat]) throw ParseError("duplicate mass entry");
      seen[flat] = true;
      mass[flat] = mass_value(entry.at("p"));
    }
    if (std::all_of(mass.begin(), mass.end(), [](double m) { return m == 0.0; }))
      throw DegenerateError("pmf has empty support");
    return JointPmf(std::move(vars), std::move(mass));
  } catch (const ParseError &) {
    throw;
  } catch (const DegenerateError &) {
    throw;
  } catch (const Error &e) {
    throw ParseError(std::string("invalid pmf document: ") + e.what());
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("invalid pmf document: ") + e.what());
  }
}

nlohmann::ordered_json pmf_to_json(const JointPmf &p) {
  nlohmann::ordered_json doc;
  doc["variables"] = nlohmann::ordered_json::array();
  for (const auto &a : p.variables()) {
    nlohmann::ordered_json v;
    v["name"] = a.name();
    v["symbols"] = a.symbols();
    doc["variables"].push_back(std::move(v));
  }
  doc["mass"] = nlohmann::ordered_json::array();
  for (std::size_t flat = 0; flat < p.cells(); ++flat) {
    if (p[flat] == 0.0) continue;
    const auto idx = p.unravel(flat);
    nlohmann::ordered_json e;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < idx.size(); ++i)
      labels.push_back(p.variables()[i].symbol(idx[i]));
    e["index"] = labels;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", p[flat]);
    e["p"] = buf;
    doc["mass"].push_back(std::move(e));
  }
  return doc;
}

std::optional<DistortionMeasure>
distortion_from_json(const nlohmann::json &doc, const Alphabet &source) {
  if (!doc.is_object() || !doc.contains("distortion")) return std::nullopt;
  try {
    const auto &d = doc.at("distortion");
    Alphabet recon("Shat", string_list(d.at("recon"), "recon"));
    std::vector<double> values;
    const auto &rows = d.at("values");
    if (!rows.is_array() || rows.size() != source.size())
      throw ParseError("distortion needs one row per source symbol");
    for (const auto &row : rows) {
      if (!row.is_array() || row.size() != recon.size())
        throw ParseError("distortion row has wrong length");
      for (const auto &v : row) values.push_back(mass_value(v));
    }
    double dbar = 0.0;
    if (d.contains("dbar")) {
      dbar = mass_value(d.at("dbar"));
    } else {
      for (double v : values) dbar = std::max(dbar, v);
    }
    return DistortionMeasure(source, std::move(recon), std::move(values), dbar);
  } catch (const ParseError &) {
    throw;
  } catch (const Error &e) {
    throw ParseError(std::string("invalid distortion: ") + e.what());
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("invalid distortion: ") + e.what());
  }
}

nlohmann::json read_json_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

} // namespace crr
