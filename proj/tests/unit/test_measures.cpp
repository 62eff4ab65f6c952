#include "doctest.h"

#include "kgraph/formats.hpp"

using namespace kg;

namespace {

KGraph ckss() { return load_kgraph("kgraph 1\nvertex v1\nvertex v2\nedge 1 e v1 v1\nedge 1 g v1 v2\nedge 1 f v2 v2\n"); }

AtomicMeasure ckss_measure(const KGraph& g) {
  return load_measure(g, "measure atomic\natom * e 1/4\natom * f 1/4\nfamily e^n g * f geometric 1/2 1/4\n").atomic();
}

}  // namespace

TEST_CASE("atomic masses use the closed-form family tail") {
  KGraph g = ckss();
  auto mu = ckss_measure(g);
  CHECK(mu.total_mass() == 1);
  CHECK(mu.mass(g, parse_path(g, "f")) == Rational(1, 4));
  CHECK(mu.mass(g, parse_path(g, "e.e.e.g")) == Rational(1, 32));
  CHECK(mu.mass(g, parse_path(g, "e.e.e")) == Rational(1, 4) + Rational(1, 16));
  CHECK(mu.point_weight(g, parse_inf_path(g, "e.e.g * f")) == Rational(1, 16));
  CHECK(mu.point_weight(g, parse_inf_path(g, "* e")) == Rational(1, 4));
  CylMeasure cm = load_measure(g, "measure atomic\natom * e 1/4\natom * f 1/4\nfamily e^n g * f geometric 1/2 1/4\n");
  CHECK(cyl_mass(g, cm, cyl_subtract(g, cyl(parse_path(g, "v1")), cyl(parse_path(g, "e")))) == Rational(1, 4));
  CHECK(mu.truncated_support(g, 3).size() == 6);
}

TEST_CASE("bad measures are rejected") {
  KGraph g = ckss();
  CHECK_THROWS(load_measure(g, "measure atomic\nfamily e^n g * f geometric 1 1/4\n"));
  CHECK_THROWS(load_measure(g, "measure atomic\natom * e -1\n"));
  CHECK_THROWS_AS(load_measure(g, "measure eigen\nbeta 2\nxi v1=1 v2=1\n"), MeasureError);
  CHECK_THROWS_AS(load_measure(g, "measure atomic\nbogus\n"), LoadError);
}

TEST_CASE("eigen measures and Perron vectors") {
  KGraph g = load_kgraph("kgraph 1\nvertex v\nedge 1 a v v\nedge 1 b v v\nedge 1 c v v\n");
  CylMeasure mu = load_measure(g, "measure eigen\nbeta 3\nxi v=1\n");
  CHECK(mu.mass(g, parse_path(g, "a.b")) == Rational(1, 9));
  auto p = perron_eigenvector(g);
  CHECK(p.beta[0] == doctest::Approx(3.0));
  CHECK(p.strictly_positive);
  for (const auto& lam : enumerate_paths_upto(g, Degree{2})) {
    auto r = check_additivity(g, mu, lam, Degree{2}, 2, 7);
    CHECK(r.holds);
  }
}

TEST_CASE("random partitions cover the cylinder") {
  KGraph g = ckss();
  auto parts = random_partition(g, parse_path(g, "v1"), 6, 3);
  CHECK(cyl_is_partition(g, parse_path(g, "v1"), parts));
}

TEST_CASE("invariant components and singularity") {
  KGraph g = ckss();
  auto mu = ckss_measure(g);
  auto dec = invariant_components(g, mu, 5);
  CHECK(dec.components.size() == 2);
  CHECK_FALSE(dec.jointly_ergodic);
  auto other = load_measure(g, "measure atomic\natom * e 1\n").atomic();
  CHECK_FALSE(mutually_singular(g, mu, other, 5).mutually_singular);
  auto third = load_measure(g, "measure atomic\natom g * f 1\n").atomic();
  CHECK(mutually_singular(g, other, third, 5).mutually_singular);
}
