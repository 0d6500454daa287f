#include "toposqt/scenario.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace toposqt {

using nlohmann::json;

namespace {

[[noreturn]] void validation_error(const std::string& name, const std::string& what) {
  fail("ValidationError", "'" + name + "': " + what);
}

Complex scalar_from_json(const json& j) {
  if (j.is_string()) return Complex(parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return Complex(Rational(j.get<long long>()));
  if (j.is_object()) {
    Rational re = 0, im = 0;
    if (j.contains("re")) re = parse_rational(j.at("re").get<std::string>());
    if (j.contains("im")) im = parse_rational(j.at("im").get<std::string>());
    return {re, im};
  }
  fail("ParseError", "matrix entries must be \"p/q\" strings, integers or {re,im} objects");
}

json scalar_to_json(const Complex& c) {
  if (c.is_real()) return to_string(c.re);
  return json{{"re", to_string(c.re)}, {"im", to_string(c.im)}};
}

Vector vector_from_json(const json& j, int expect_dim, const std::string& name) {
  if (!j.is_array() || static_cast<int>(j.size()) != expect_dim)
    validation_error(name, "vector must have " + std::to_string(expect_dim) + " entries");
  Vector v;
  for (const auto& e : j) v.push_back(scalar_from_json(e));
  return v;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(scalar_to_json(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, int expect_dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != expect_dim)
    fail("ParseError", "matrix must have " + std::to_string(expect_dim) + " rows");
  Matrix m(expect_dim);
  for (int r = 0; r < expect_dim; ++r) {
    const auto& row = j.at(static_cast<size_t>(r));
    if (!row.is_array() || static_cast<int>(row.size()) != expect_dim)
      fail("ParseError", "matrix row " + std::to_string(r) + " must have " +
                             std::to_string(expect_dim) + " entries");
    for (int c = 0; c < expect_dim; ++c) m.at(r, c) = scalar_from_json(row.at(static_cast<size_t>(c)));
  }
  return m;
}

json subobject_to_json(const ClopenSubobject& s) {
  json out = json::object();
  for (int v = 0; v < s.poset().size(); ++v) {
    json atoms = json::array();
    for (int a = 0; a < s.poset().at(v).atom_count(); ++a)
      if (s.at(v) & (AtomMask{1} << a)) atoms.push_back(a);
    out[s.poset().at(v).label] = std::move(atoms);
  }
  return out;
}

json sieve_to_json(const Sieve& s) {
  json members = json::array();
  for (int v : s.members()) members.push_back(s.poset().at(v).label);
  return json{{"root", s.poset().at(s.root()).label},
              {"members", std::move(members)},
              {"totally_true", s.is_principal()},
              {"totally_false", s.is_empty()}};
}

json weight_to_json(const OrderReversingWeight& w) {
  json out = json::object();
  for (int v = 0; v < w.poset().size(); ++v) out[w.poset().at(v).label] = to_string(w.at(v));
  return out;
}

json product_sieve_to_json(const ProductSieve& s) {
  json cutoff = json::object();
  for (int v : s.poset().down_set(s.root()))
    cutoff[s.poset().at(v).label] = to_string(s.cutoff(v));
  return json{{"root", json{{"context", s.poset().at(s.root()).label},
                            {"r", to_string(s.threshold())}}},
              {"cutoff", std::move(cutoff)}};
}

const Projector& Scenario::proposition(const std::string& name) const {
  if (auto it = propositions.find(name); it != propositions.end()) return it->second;
  if (auto it = projectors.find(name); it != projectors.end()) return it->second;
  fail("ValidationError", "unknown proposition or projector '" + name + "'");
}

const Hermitian& Scenario::hermitian(const std::string& name) const {
  if (auto it = hermitians.find(name); it != hermitians.end()) return it->second;
  fail("ValidationError", "unknown operator '" + name + "'");
}

const UnitVector& Scenario::vector(const std::string& name) const {
  if (auto it = vectors.find(name); it != vectors.end()) return it->second;
  fail("ValidationError", "unknown state vector '" + name + "'");
}

const Density& Scenario::density(const std::string& name) const {
  if (auto it = densities.find(name); it != densities.end()) return it->second;
  fail("ValidationError", "unknown density '" + name + "'");
}

const Matrix& Scenario::unitary(const std::string& name) const {
  if (auto it = unitaries.find(name); it != unitaries.end()) return it->second;
  fail("ValidationError", "unknown unitary '" + name + "'");
}

namespace {

void check_unique(const Scenario& s, const std::string& name) {
  const bool taken = s.projectors.count(name) || s.hermitians.count(name) ||
                     s.vectors.count(name) || s.densities.count(name) ||
                     s.propositions.count(name) || s.unitaries.count(name);
  if (taken) fail("ValidationError", "name '" + name + "' is defined twice");
}

Scenario build_scenario(const json& root) {
  Scenario s;
  if (!root.is_object()) fail("ParseError", "scenario must be a JSON object");
  s.dim = root.at("dim").get<int>();
  if (s.dim < 2 || s.dim > 16) fail("ValidationError", "dim must lie in [2,16]");
  if (root.value("field", "rational") != std::string("rational"))
    fail("ValidationError", "only the \"rational\" number field is supported");

  const json operators = root.value("operators", json::object());
  for (const auto& [name, spec] : operators.items()) {
    check_unique(s, name);
    try {
      if (spec.contains("projector")) {
        Projector p(matrix_from_json(spec.at("projector"), s.dim));
        SpectralResolution res = spectral_resolution(Hermitian(p.mat()));
        s.hermitians.emplace(name, Hermitian(p.mat(), std::move(res)));
        s.projectors.emplace(name, std::move(p));
      } else if (spec.contains("hermitian")) {
        Hermitian h(matrix_from_json(spec.at("hermitian"), s.dim));
        if (spec.contains("resolution")) {
          std::vector<SpectralResolution::Eigenpair> hint;
          for (const auto& pair : spec.at("resolution")) {
            hint.push_back({parse_rational(pair.at("value").get<std::string>()),
                            Projector(matrix_from_json(pair.at("projector"), s.dim))});
          }
          h.attach(spectral_resolution(h, hint));
        } else {
          try {
            h.attach(spectral_resolution(h));
          } catch (const Error& e) {
            if (e.kind() != "IrrationalSpectrum") throw;
            // Left unresolved; operations needing the resolution will say so.
          }
        }
        s.hermitians.emplace(name, std::move(h));
      } else {
        fail("ValidationError", "operator needs a \"projector\" or \"hermitian\" matrix");
      }
    } catch (const Error& e) {
      validation_error(name, e.what());
    }
  }

  const json states = root.value("states", json::object());
  for (const auto& [name, spec] : states.items()) {
    check_unique(s, name);
    try {
      if (spec.contains("vector")) {
        s.vectors.emplace(name, UnitVector(vector_from_json(spec.at("vector"), s.dim, name)));
      } else if (spec.contains("mixture")) {
        std::vector<Density::Term> mix;
        for (const auto& term : spec.at("mixture"))
          mix.push_back({parse_rational(term.at("weight").get<std::string>()),
                         UnitVector(vector_from_json(term.at("vector"), s.dim, name))});
        if (spec.contains("matrix")) {
          s.densities.emplace(name, Density(matrix_from_json(spec.at("matrix"), s.dim), mix));
        } else {
          s.densities.emplace(name, Density(mix));
        }
      } else {
        fail("ValidationError", "state needs a \"vector\" or a \"mixture\"");
      }
    } catch (const Error& e) {
      validation_error(name, e.what());
    }
  }

  if (!root.contains("seeds") || root.at("seeds").empty())
    fail("ValidationError", "scenario needs at least one seed basis");
  for (const auto& spec : root.at("seeds")) {
    Seed seed;
    seed.name = spec.at("name").get<std::string>();
    for (const auto& atom : spec.at("atoms")) {
      const std::string ref = atom.get<std::string>();
      auto it = s.projectors.find(ref);
      if (it == s.projectors.end())
        fail("ValidationError", "seed '" + seed.name + "' references unknown projector '" + ref + "'");
      seed.atoms.emplace_back(ref, it->second);
    }
    s.seeds.push_back(std::move(seed));
  }
  s.poset = generate_poset(s.dim, s.seeds);

  const json propositions = root.value("propositions", json::object());
  for (const auto& [name, spec] : propositions.items()) {
    check_unique(s, name);
    try {
      if (spec.contains("projector")) {
        const auto& ref = spec.at("projector");
        if (ref.is_string()) {
          s.propositions.emplace(name, s.proposition(ref.get<std::string>()));
        } else {
          s.propositions.emplace(name, Projector(matrix_from_json(ref, s.dim)));
        }
      } else if (spec.contains("op")) {
        const Hermitian& h = s.hermitian(spec.at("op").get<std::string>());
        const auto& iv = spec.at("interval");
        const Rational lo = parse_rational(iv.at(0).get<std::string>());
        const Rational hi = parse_rational(iv.at(1).get<std::string>());
        if (hi < lo) fail("ValidationError", "interval endpoints are reversed");
        s.propositions.emplace(name, interval_projector(h.resolution(), lo, hi));
      } else {
        fail("ValidationError", "proposition needs \"projector\" or \"op\"+\"interval\"");
      }
    } catch (const Error& e) {
      validation_error(name, e.what());
    }
  }

  const json unitaries = root.value("unitaries", json::object());
  for (const auto& [name, spec] : unitaries.items()) {
    check_unique(s, name);
    Matrix u = matrix_from_json(spec, s.dim);
    if (!u.is_unitary()) validation_error(name, "matrix is not unitary");
    s.unitaries.emplace(name, std::move(u));
  }

  return s;
}

}  // namespace

Scenario load_scenario_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Recover line/column from the byte offset for a usable message.
    size_t line = 1, col = 1;
    for (size_t i = 0; i < text.size() && i + 1 < e.byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail("ParseError", origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                           e.what());
  }
  return build_scenario(root);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("ParseError", "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario_text(buf.str(), path);
}

}  // namespace toposqt
