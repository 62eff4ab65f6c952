#include "doctest.h"

#include "kgraph/formats.hpp"
#include "kgraph/rep.hpp"

#include <cmath>

using namespace kg;

namespace {

std::shared_ptr<const KGraph> graph_of(const char* text) { return std::make_shared<KGraph>(load_kgraph(text)); }

std::shared_ptr<const ProjectiveSystem> seal() {
  auto g = graph_of("kgraph 1\nvertex v\nedge 1 e v v\n");
  auto s = std::make_shared<Sbfs>(abstract_sbfs(g, load_sbfs("sbfs abstract\ndomain v = 0 1\nmap e: 0->1 1->0\n").spec));
  return std::make_shared<ProjectiveSystem>(standard_projective(s));
}

std::shared_ptr<const ProjectiveSystem> ckss(int n) {
  auto g = graph_of("kgraph 1\nvertex v1\nvertex v2\nedge 1 e v1 v1\nedge 1 g v1 v2\nedge 1 f v2 v2\n");
  auto mu = load_measure(*g, "measure atomic\natom * e 1/4\natom * f 1/4\nfamily e^n g * f geometric 1/2 1/4\n");
  auto s = std::make_shared<Sbfs>(standard_sbfs(g, mu.atomic(), n));
  return std::make_shared<ProjectiveSystem>(standard_projective(s));
}

double interior_gap(const Frame& f, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double gap = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j)
      if (f.interior[i] && f.interior[j])
        gap = std::max(gap, std::abs(a(Eigen::Index(i), Eigen::Index(j)) - b(Eigen::Index(i), Eigen::Index(j))));
  return gap;
}

}  // namespace

TEST_CASE("seal: the swap satisfies the relations and commutes with itself") {
  Frame f = make_frame(seal(), 1);
  CHECK(f.fully_interior());
  auto ck = ck_check(f, 1);
  CHECK(ck.passed);
  auto te = build_operator(f, parse_path(f.g(), "e")).to_dense();
  CHECK((te * te.transpose() - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
  auto c = commutant(f, 1);
  CHECK(c.dim == 2);
  CHECK_FALSE(c.all_diagonal);
  auto irr = irreducibility_check(f, 1);
  CHECK(irr.verdict == "reducible");
  CHECK_FALSE(irr.inconsistent);
}

TEST_CASE("projection-valued measure on cylinders") {
  Frame f = make_frame(ckss(8), 2);
  const KGraph& g = f.g();
  REQUIRE(f.interior_count() > 0);
  CHECK(ck_check(f, 2).passed);
  auto te = build_operator(f, parse_path(g, "e")).to_dense();
  for (const char* eta : {"e", "g", "g.f", "e.g"}) {
    FinPath p = parse_path(g, eta);
    FinPath lp = compose(g, parse_path(g, "e"), p);
    auto lhs = pvm(f, cyl(lp)).to_dense();
    Eigen::MatrixXd rhs = te * pvm(f, cyl(p)).to_dense() * te.transpose();
    CHECK(interior_gap(f, lhs, rhs) < 1e-12);
    CHECK(interior_gap(f, lhs, range_projection(f, cyl(lp)).to_dense()) < 1e-12);
  }
  auto whole = pvm(f, cyl(parse_path(g, "v1"))).to_dense();
  auto parts = (pvm(f, cyl(parse_path(g, "e"))) + pvm(f, cyl(parse_path(g, "g")))).to_dense();
  CHECK(interior_gap(f, whole, parts) < 1e-12);
}

TEST_CASE("monicity and irreducibility reports agree with each other") {
  Frame f = make_frame(ckss(8), 1);
  auto m = monicity_check(f);
  CHECK_FALSE(m.inconsistent);
  if (m.monic) {
    CHECK(m.phi_injective);
    CHECK(m.span_full_rank);
    for (double x : m.monic_vector) CHECK(x > 0);
  }
  auto irr = irreducibility_check(f, 1);
  CHECK(irr.verdict == "reducible");
  CHECK(irr.components.size() == 2);
  CHECK_FALSE(irr.inconsistent);
  auto cls = purely_atomic_classify(f);
  CHECK(cls.consistent);
  CHECK(cls.orbit_classes == 2);
}

TEST_CASE("disjointness of the two orbits") {
  auto p = ckss(8);
  auto comps = coding_components(p->sbfs());
  REQUIRE(comps.size() == 2);
  std::vector<Frame> frames;
  for (const auto& c : comps) {
    auto s = std::make_shared<Sbfs>(restrict_sbfs(p->sbfs(), c, false));
    frames.push_back(make_frame(std::make_shared<ProjectiveSystem>(standard_projective(s)), 1));
  }
  auto d = disjointness_check(frames[0], frames[1], 1);
  CHECK(d.mutually_singular);
  REQUIRE(d.disjoint.has_value());
  CHECK(*d.disjoint);
  CHECK_FALSE(d.inconsistent);
}

TEST_CASE("skeleton with unit step on a 1-graph is the graph itself") {
  auto g = graph_of("kgraph 1\nvertex v1\nvertex v2\nedge 1 e v1 v1\nedge 1 g v1 v2\nedge 1 f v2 v2\n");
  auto sk = skeleton(*g, Degree{1});
  CHECK(sk.adjacency_matches);
  CHECK(sk.graph->edge_count() == g->edge_count());
  CHECK(sk.graph->vertex_count() == g->vertex_count());
  for (EdgeId e = 0; e < sk.graph->edge_count(); ++e) {
    FinPath in_sk = make_path(*sk.graph, std::vector<EdgeId>{e});
    CHECK(path_functor(*g, sk, in_sk) == sk.edge_paths[e]);
  }
  auto x = parse_inf_path(*g, "e.g * f");
  auto y = skeleton_preimage(*g, sk, x);
  CHECK(render(*g, path_functor(*g, sk, y.prefix())) == render(*g, x.prefix()));
}

TEST_CASE("skeleton of a 2-graph with step (1,1)") {
  auto g = graph_of(
      "kgraph 2\nvertex v\nedge 1 a v v\nedge 1 b v v\nedge 2 c v v\nedge 2 d v v\n"
      "square a c = c a\nsquare a d = d b\nsquare b c = c b\nsquare b d = d a\n");
  auto sk = skeleton(*g, Degree{1, 1});
  CHECK(sk.adjacency_matches);
  CHECK(sk.graph->edge_count() == 4);
  std::vector<InfPath> atoms{parse_inf_path(*g, "* a|c")};
  auto t = transfer(*g, sk, atoms);
  CHECK(t.implication_holds);
}
