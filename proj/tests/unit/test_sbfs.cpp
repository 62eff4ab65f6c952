#include "doctest.h"

#include "kgraph/formats.hpp"

using namespace kg;

namespace {

std::shared_ptr<const KGraph> ckss() {
  return std::make_shared<KGraph>(
      load_kgraph("kgraph 1\nvertex v1\nvertex v2\nedge 1 e v1 v1\nedge 1 g v1 v2\nedge 1 f v2 v2\n"));
}

std::shared_ptr<const KGraph> seal() { return std::make_shared<KGraph>(load_kgraph("kgraph 1\nvertex v\nedge 1 e v v\n")); }

std::shared_ptr<Sbfs> ckss_system(int n) {
  auto g = ckss();
  auto mu = load_measure(*g, "measure atomic\natom * e 1/4\natom * f 1/4\nfamily e^n g * f geometric 1/2 1/4\n");
  return std::make_shared<Sbfs>(standard_sbfs(g, mu.atomic(), n));
}

}  // namespace

TEST_CASE("standard system of an atomic measure") {
  auto s = ckss_system(6);
  CHECK(s->size() == 9);
  auto rep = validate_sbfs(*s, 3);
  CHECK(rep.passed);
  CHECK(rep.interior_atoms < s->size());
  for (const auto& [y, phi] : rn_derivative(*s, parse_path(s->g(), "e")))
    CHECK(phi == (s->names[y] == "v1 * e" ? Rational(1) : Rational(1, 2)));
  auto p = standard_projective(s);
  CHECK(validate_projective(p, 3).passed);
  auto phi = encode_phi(*s);
  CHECK(phi.injective);
}

TEST_CASE("a standard system needs mass in every vertex cylinder") {
  auto g = ckss();
  auto mu = load_measure(*g, "measure atomic\natom * e 1\n");
  CHECK_THROWS_AS(standard_sbfs(g, mu.atomic(), 4), SbfsError);
}

TEST_CASE("abstract systems are checked when built") {
  auto g = seal();
  auto ok = load_sbfs("sbfs abstract\ndomain v = 0 1\nmap e: 0->1 1->0\n");
  CHECK_FALSE(ok.standard);
  auto s = abstract_sbfs(g, ok.spec);
  CHECK(validate_sbfs(s, 2).passed);
  CHECK(coding_components(s).size() == 1);
  CHECK_THROWS_AS(abstract_sbfs(g, load_sbfs("sbfs abstract\ndomain v = 0 1\nmap e: 0->1 1->1\n").spec), SbfsError);
  CHECK_THROWS_AS(abstract_sbfs(g, load_sbfs("sbfs abstract\ndomain v = 0 1\nmap e: 0->1\n").spec), SbfsError);
  CHECK_THROWS_AS(load_sbfs("sbfs abstract\ndomain v = 0 1\nmap e 0->1\n"), LoadError);
  // a null point hit by a positive one
  CHECK_THROWS_AS(abstract_sbfs(g, load_sbfs("sbfs abstract\ndomain v = 0 1\nmap e: 0->1 1->0\nweight 1 0\n").spec),
                  SbfsError);
}

TEST_CASE("a tampered coding map breaks condition (d)") {
  auto g = seal();
  auto f = load_sbfs("sbfs abstract\ndomain v = 0 1 2\nmap e: 0->1 1->2 2->0\ncode 1 1->0 2->2 0->1\n");
  auto s = abstract_sbfs(g, f.spec);
  auto rep = validate_sbfs(s, 2);
  CHECK_FALSE(rep.passed);
  CHECK_FALSE(rep.conditions.at('d'));
}

TEST_CASE("restriction to a coding component") {
  auto s = ckss_system(6);
  auto comps = coding_components(*s);
  CHECK(comps.size() == 2);
  for (const auto& c : comps) {
    auto r = restrict_sbfs(*s, c, false);
    CHECK(r.restricted);
    CHECK(coding_components(r).size() == 1);
  }
  CHECK_THROWS(restrict_sbfs(*s, comps.front(), true));
}
