#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/fixtures.hpp"

using namespace toposqt;
using namespace toposqt::testing;

namespace {

Density half_mix(const SpinFixture&) {
  return Density({{Rational(1, 2), basis_state(4, 0)}, {Rational(1, 2), basis_state(4, 3)}});
}

Density pure_density(int k) { return Density({{Rational(1), basis_state(4, k)}}); }

}  // namespace

TEST_CASE("the measure of the full and empty subobjects") {
  SpinFixture f;
  Rng rng(61);
  for (int i = 0; i < 5; ++i) {
    const Density rho = random_density(rng, 4);
    const OrderReversingWeight one = measure(f.poset, rho, ClopenSubobject::full(f.poset));
    const OrderReversingWeight zero = measure(f.poset, rho, ClopenSubobject::empty(f.poset));
    for (int v = 0; v < f.poset.size(); ++v) {
      CHECK(one.at(v) == 1);
      CHECK(zero.at(v) == 0);
    }
  }
}

TEST_CASE("the balanced mixture weighs the daseinised atom") {
  SpinFixture f;
  const Density rho = half_mix(f);
  const ClopenSubobject s = dasein_proj_global(f.poset, f.p[0]).subobject;
  const OrderReversingWeight w = measure(f.poset, rho, s);
  CHECK(w.at(f.ctx("V")) == Rational(1, 2));
  CHECK(w.at(f.ctx("V_{P2P3}")) == Rational(1));  // the projector there is P1+P4
  CHECK(w.at(f.ctx("V_{P3P4}")) == Rational(1, 2));
}

TEST_CASE("measure axioms hold for state-induced measures") {
  SpinFixture f;
  Rng rng(67);
  const Density rho = random_density(rng, 4);
  const MeasureFn mu = [&](const ClopenSubobject& s) { return measure(f.poset, rho, s); };
  std::vector<ClopenSubobject> samples;
  for (int i = 0; i < 6; ++i) samples.push_back(random_subobject(rng, f.poset));
  const MeasureAxiomReport report = check_measure_axioms(f.poset, mu, samples);
  CHECK(report.passed());

  // Disjoint subobjects add, also across a three-member family.
  const ClopenSubobject s1 = dasein_proj_global(f.poset, f.p[1]).subobject;
  const ClopenSubobject s2 = dasein_proj_global(f.poset, f.p[2]).subobject;
  const ClopenSubobject s3 = dasein_proj_global(f.poset, f.p[3]).subobject;
  const ClopenSubobject all = join(join(s1, s2), s3);
  for (int v = 0; v < f.poset.size(); ++v) {
    const bool pairwise_disjoint = (s1.at(v) & s2.at(v)) == 0 && (s1.at(v) & s3.at(v)) == 0 &&
                                   (s2.at(v) & s3.at(v)) == 0;
    if (!pairwise_disjoint) continue;
    CHECK(mu(all).at(v) == mu(s1).at(v) + mu(s2).at(v) + mu(s3).at(v));
  }
}

TEST_CASE("the excluded-middle weight stays below one") {
  SpinFixture f;
  const ClopenSubobject s = dasein_proj_global(f.poset, f.p[0]).subobject;
  const ClopenSubobject ors = join(s, heyting_not(s));
  // The subobject of the first atom always keeps the point of its own
  // block, so the aligned state weighs it 1 everywhere; a state living in
  // an orthogonal direction exposes the gap of the excluded middle.
  const OrderReversingWeight aligned = measure(f.poset, pure_density(0), ors);
  CHECK(aligned.at(f.ctx("V")) == 1);
  const OrderReversingWeight w = measure(f.poset, pure_density(1), ors);
  bool strict = false;
  for (int v = 0; v < f.poset.size(); ++v) {
    CHECK(w.at(v) <= 1);
    if (w.at(v) < 1) strict = true;
  }
  CHECK(strict);
  CHECK(w.at(f.ctx("V")) == 0);  // neither the point nor its negation
}

TEST_CASE("state weights collapse consistently across contexts") {
  SpinFixture f;
  const Density pure = pure_density(0);
  const MeasureFn mu_pure = [&](const ClopenSubobject& s) { return measure(f.poset, pure, s); };
  const auto m1 = extract_state_weights(f.poset, mu_pure);
  CHECK(m1.at(f.p[0].mat()) == Rational(1));
  CHECK(m1.at(f.p[1].mat()) == Rational(0));

  const Density rho = half_mix(f);
  const MeasureFn mu = [&](const ClopenSubobject& s) { return measure(f.poset, rho, s); };
  const auto m2 = extract_state_weights(f.poset, mu);
  CHECK(m2.at(f.sum({0, 3}).mat()) == Rational(1));
  CHECK(m2.at(f.p[0].mat()) == Rational(1, 2));
}

TEST_CASE("a perturbed weight family is flagged as no measure") {
  SpinFixture f;
  const Density rho = half_mix(f);
  const int bumped = f.ctx("V_{P1}");
  const MeasureFn crooked = [&](const ClopenSubobject& s) {
    OrderReversingWeight w = measure(f.poset, rho, s);
    std::vector<Rational> vals = w.values();
    // Lift the value at one minimal context when it picks exactly the P1
    // point; stays order-reversing, breaks cross-context agreement.
    const Context& c = f.poset.at(bumped);
    AtomMask p1_mask = 0;
    for (int a = 0; a < c.atom_count(); ++a)
      if (c.atoms[static_cast<size_t>(a)] == f.p[0]) p1_mask = AtomMask{1} << a;
    if (s.at(bumped) == p1_mask)
      vals[static_cast<size_t>(bumped)] =
          std::min(Rational(1), vals[static_cast<size_t>(bumped)] + Rational(1, 4));
    return OrderReversingWeight(f.poset, std::move(vals));
  };
  CHECK_THROWS_WITH_AS(extract_state_weights(f.poset, crooked), doctest::Contains("IllDefined"),
                       Error);
}

TEST_CASE("the l map on constant weights") {
  SpinFixture f;
  const int v = f.ctx("V");
  const OrderReversingWeight ones(f.poset,
                                  std::vector<Rational>(static_cast<size_t>(f.poset.size()), Rational(1)));
  const ProductSieve full = l_map(ones, v, Rational(2, 3));
  for (int w : f.poset.down_set(v)) CHECK(full.cutoff(w) == Rational(2, 3));

  const OrderReversingWeight zeros(f.poset,
                                   std::vector<Rational>(static_cast<size_t>(f.poset.size()), Rational(0)));
  const ProductSieve empty = l_map(zeros, v, Rational(1));
  for (int w : f.poset.down_set(v)) CHECK(empty.cutoff(w) == Rational(0));
}

TEST_CASE("the l map composed with the measure reproduces the worked cutoffs") {
  SpinFixture f;
  const Density rho = half_mix(f);
  const ClopenSubobject s = dasein_proj_global(f.poset, f.p[0]).subobject;
  const ProductSieve ps = l_map(measure(f.poset, rho, s), f.ctx("V"), Rational(1));
  CHECK(ps.cutoff(f.ctx("V")) == Rational(1, 2));
  CHECK(ps.cutoff(f.ctx("V_{P2P3}")) == Rational(1));
}

TEST_CASE("the l map preserves joins and separates weights") {
  SpinFixture f;
  Rng rng(71);
  const int v = f.ctx("V");
  for (int i = 0; i < 30; ++i) {
    const OrderReversingWeight g1 = random_weight(rng, f.poset);
    const OrderReversingWeight g2 = random_weight(rng, f.poset);
    std::vector<Rational> sup(static_cast<size_t>(f.poset.size()));
    for (int w = 0; w < f.poset.size(); ++w)
      sup[static_cast<size_t>(w)] = std::max(g1.at(w), g2.at(w));
    const OrderReversingWeight gj(f.poset, std::move(sup));
    CHECK(l_map(gj, v, Rational(1)) == join(l_map(g1, v, Rational(1)), l_map(g2, v, Rational(1))));
    if (!(g1 == g2)) CHECK_FALSE(l_map(g1, v, Rational(1)) == l_map(g2, v, Rational(1)));
  }
}

TEST_CASE("probabilistic truth values and their compatibility") {
  SpinFixture f;
  const Density rho = half_mix(f);
  const int v = f.ctx("V");

  const DaseinisedProposition top = dasein_proj_global(f.poset, Projector::one(4));
  const ProductSieve all = truth_value_probabilistic(f.poset, top, rho, v, Rational(2, 3));
  for (int w : f.poset.down_set(v)) CHECK(all.cutoff(w) == Rational(2, 3));

  const DaseinisedProposition prop = dasein_proj_global(f.poset, f.p[0]);
  const ProductSieve ps = truth_value_probabilistic(f.poset, prop, rho, v, Rational(1));
  CHECK(ps.cutoff(v) == Rational(1, 2));
  CHECK(ps.cutoff(f.ctx("V_{P2P3}")) == Rational(1));

  // Restriction compatibility: the value rooted lower is the restriction.
  for (int w : f.poset.down_set(v)) {
    const ProductSieve sub = truth_value_probabilistic(f.poset, prop, rho, w, Rational(1));
    for (int u : f.poset.down_set(w)) CHECK(sub.cutoff(u) == ps.cutoff(u));
  }
}

TEST_CASE("thresholds separate what support-level truth cannot") {
  SpinFixture f;
  const Density rho1({{Rational(3, 4), basis_state(4, 0)}, {Rational(1, 4), basis_state(4, 1)}});
  const Density rho2({{Rational(3, 5), basis_state(4, 0)}, {Rational(2, 5), basis_state(4, 1)}});
  const Context& top = f.poset.at(f.ctx("V"));
  const int v = f.ctx("V");

  // Probability-one truth values agree on every proposition: both states
  // share the support P1+P2.
  const TruthObject t1 = TruthObject::mixed(f.poset, rho1, Rational(1));
  const TruthObject t2 = TruthObject::mixed(f.poset, rho2, Rational(1));
  for (AtomMask m = 0; m < 16; ++m) {
    const DaseinisedProposition prop = dasein_proj_global(f.poset, top.atom_sum(m));
    for (int w = 0; w < f.poset.size(); ++w)
      CHECK(truth_value_truthobject(f.poset, prop, t1, w) ==
            truth_value_truthobject(f.poset, prop, t2, w));
  }

  // The product-sieve truth values differ already on the first atom.
  const DaseinisedProposition p1 = dasein_proj_global(f.poset, f.p[0]);
  const ProductSieve s1 = truth_value_probabilistic(f.poset, p1, rho1, v, Rational(1));
  const ProductSieve s2 = truth_value_probabilistic(f.poset, p1, rho2, v, Rational(1));
  CHECK_FALSE(s1 == s2);
  CHECK(s1.cutoff(v) == Rational(3, 4));
  CHECK(s2.cutoff(v) == Rational(3, 5));

  // Equivalently: one fixed threshold between the traces separates them.
  const TruthObject t1r = TruthObject::mixed(f.poset, rho1, Rational(7, 10));
  const TruthObject t2r = TruthObject::mixed(f.poset, rho2, Rational(7, 10));
  CHECK_FALSE(truth_value_truthobject(f.poset, p1, t1r, v) ==
              truth_value_truthobject(f.poset, p1, t2r, v));
}
