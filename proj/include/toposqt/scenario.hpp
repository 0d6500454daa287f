#pragma once

#include "toposqt/probability.hpp"

#include <nlohmann/json_fwd.hpp>

#include <map>
#include <string>

namespace toposqt {

// A fully validated scenario: every named object has passed its module
// validator and the context poset is generated from the seeds.
struct Scenario {
  int dim = 0;
  std::map<std::string, Projector> projectors;
  std::map<std::string, Hermitian> hermitians;  // resolved when discoverable or hinted
  std::map<std::string, UnitVector> vectors;
  std::map<std::string, Density> densities;
  std::map<std::string, Projector> propositions;  // resolved spectral projectors
  std::map<std::string, Matrix> unitaries;
  std::vector<Seed> seeds;
  ContextPoset poset;

  Scenario() = default;
  Scenario(const Scenario&) = delete;  // subobjects point into the poset
  Scenario& operator=(const Scenario&) = delete;
  Scenario(Scenario&&) = default;
  Scenario& operator=(Scenario&&) = default;

  const Projector& proposition(const std::string& name) const;
  const Hermitian& hermitian(const std::string& name) const;
  const UnitVector& vector(const std::string& name) const;
  const Density& density(const std::string& name) const;
  const Matrix& unitary(const std::string& name) const;
};

Scenario load_scenario(const std::string& path);
Scenario load_scenario_text(const std::string& text, const std::string& origin = "<memory>");

// Shared JSON encodings.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, int expect_dim);
nlohmann::json subobject_to_json(const ClopenSubobject& s);
nlohmann::json sieve_to_json(const Sieve& s);
nlohmann::json weight_to_json(const OrderReversingWeight& w);
nlohmann::json product_sieve_to_json(const ProductSieve& s);

}  // namespace toposqt
