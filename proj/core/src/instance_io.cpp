#include "conrap/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace conrap {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InvalidInstance(where + ": missing field '" + key + "'");
  return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_number()) throw InvalidInstance(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> number_array(const json& obj, const char* key, std::size_t n) {
  const auto& v = field(obj, key, "instance");
  if (!v.is_array() || v.size() != n) {
    throw InvalidInstance(std::string("instance: '") + key + "' must be an array of length n");
  }
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!v[i].is_number()) {
      throw InvalidInstance(std::string("instance: '") + key + "' entry is not a number", i);
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

ScalarTerm parse_term(const json& obj, std::size_t index, const char* list) {
  const std::string where = std::string(list) + "[" + std::to_string(index) + "]";
  if (!obj.is_object()) throw InvalidInstance(where + ": term must be an object", index);
  const auto& kind_field = field(obj, "kind", where);
  if (!kind_field.is_string()) throw InvalidInstance(where + ": 'kind' must be a string", index);
  try {
    switch (term_kind_from_string(kind_field.get<std::string>())) {
      case TermKind::QuadLin:
        return ScalarTerm::quad_lin(number(obj, "d", where), number(obj, "c", where));
      case TermKind::Holding:
        return ScalarTerm::holding(number(obj, "c", where), number(obj, "k", where));
      case TermKind::Recip:
        return ScalarTerm::recip(number(obj, "c", where));
      case TermKind::ExpSearch:
        return ScalarTerm::exp_search(number(obj, "m", where), number(obj, "c", where));
      case TermKind::NegEntropy:
        return ScalarTerm::neg_entropy(number(obj, "a", where));
      case TermKind::QuadConstraint:
        return ScalarTerm::quad_constraint(number(obj, "a", where), number(obj, "z", where));
      case TermKind::LinConstraint:
        return ScalarTerm::lin_constraint(number(obj, "a", where));
    }
  } catch (const InvalidInstance& e) {
    if (e.index() != InvalidInstance::npos) throw;
    throw InvalidInstance(where + ": " + e.what(), index);
  }
  throw InvalidInstance(where + ": unreachable term kind", index);
}

std::vector<ScalarTerm> term_array(const json& obj, const char* key, std::size_t n) {
  const auto& v = field(obj, key, "instance");
  if (!v.is_array() || v.size() != n) {
    throw InvalidInstance(std::string("instance: '") + key + "' must be an array of length n");
  }
  std::vector<ScalarTerm> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(parse_term(v[i], i, key));
  return out;
}

json term_to_json(const ScalarTerm& t) {
  json obj;
  obj["kind"] = std::string(to_string(t.kind()));
  const auto names = t.param_names();
  for (std::size_t k = 0; k < names.size(); ++k) obj[std::string(names[k])] = t.param(k);
  return obj;
}

}  // namespace

ProblemInstance parse_instance(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidInstance(std::string("instance: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidInstance("instance: top level must be an object");

  const auto& n_field = field(doc, "n", "instance");
  if (!n_field.is_number_integer() || n_field.get<long long>() < 1) {
    throw InvalidInstance("instance: 'n' must be a positive integer");
  }
  const auto n = n_field.get<std::size_t>();

  const auto& kind_field = field(doc, "constraint", "instance");
  ConstraintKind kind;
  if (kind_field == "inequality") {
    kind = ConstraintKind::Inequality;
  } else if (kind_field == "equality") {
    kind = ConstraintKind::LinearEquality;
  } else {
    throw InvalidInstance("instance: 'constraint' must be \"inequality\" or \"equality\"");
  }

  ProblemInstance instance(term_array(doc, "phi", n), term_array(doc, "g", n),
                           number_array(doc, "l", n), number_array(doc, "u", n),
                           number(doc, "b", "instance"), kind);
  return normalize_signs(instance);
}

std::string instance_to_json(const ProblemInstance& instance, int indent) {
  json doc;
  doc["n"] = instance.size();
  doc["constraint"] = std::string(to_string(instance.constraint_kind()));
  doc["b"] = instance.rhs();
  doc["l"] = instance.lower();
  doc["u"] = instance.upper();
  auto& phi = doc["phi"] = json::array();
  for (const auto& t : instance.phi()) phi.push_back(term_to_json(t));
  auto& g = doc["g"] = json::array();
  for (const auto& t : instance.g()) g.push_back(term_to_json(t));
  return doc.dump(indent);
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

void save_instance(const ProblemInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path.string());
  out << instance_to_json(instance) << '\n';
  if (!out) throw std::runtime_error("failed writing instance file " + path.string());
}

}  // namespace conrap
