#include <random>

#include "doctest.h"
#include "qpb/errors.hpp"
#include "qpb/packs.hpp"

using namespace qpb;

namespace {

struct Groups {
  std::shared_ptr<Presentation> su = builtin_group("suq2");
  std::shared_ptr<Presentation> u1 = builtin_group("u1");
  HopfMorphism j() const {
    return HopfMorphism(su.get(), u1.get(),
                        {u1->parse_lin("z"), u1->parse_lin("z*"), u1->parse_lin("0"), u1->parse_lin("0")});
  }
};

Sweedler tensor2(const Presentation& p, std::initializer_list<std::tuple<const char*, const char*, const char*>> ts) {
  Sweedler s;
  for (const auto& [c, a, b] : ts) {
    Lin la = p.parse_lin(a), lb = p.parse_lin(b);
    for (const auto& [wa, ca] : la)
      for (const auto& [wb, cb] : lb) add_term(s.terms, std::vector<Word>{wa, wb}, Scalar::parse(c) * ca * cb);
  }
  return s;
}

}  // namespace

TEST_CASE("multiply: quantum-plane commutation and unitarity relations") {
  Groups g;
  const Presentation& su = *g.su;
  CHECK(su.parse("gamma") * su.parse("alpha") == Scalar::mu().inv() * su.parse("alpha gamma"));
  CHECK(su.parse("alpha") * su.parse("alpha*") == su.parse("1-mu^2*gamma gamma*"));
  CHECK((su.parse("alpha") * su.parse("alpha*")).str() == "1-mu^2*gamma gamma*");
  const Presentation& u1 = *g.u1;
  CHECK(u1.parse("z^2") * u1.parse("z*") == u1.parse("z"));
}

TEST_CASE("multiply: elements of different presentations do not mix") {
  Groups g;
  CHECK_THROWS_AS(g.su->parse("alpha") * g.u1->parse("z"), DomainMismatch);
}

TEST_CASE("comultiply: gamma against the matrix coproduct") {
  Groups g;
  const Presentation& su = *g.su;
  // u = [[alpha, -mu gamma*], [gamma, alpha*]], phi(u_21) = u_21 (x) u_11 + u_22 (x) u_21
  Sweedler expect = tensor2(su, {{"1", "gamma", "alpha"}, {"1", "alpha*", "gamma"}});
  CHECK(su.comultiply(su.parse_lin("gamma")) == expect);
  Sweedler phi_gs = tensor2(su, {{"1", "alpha", "gamma*"}, {"1", "gamma*", "alpha*"}});
  CHECK(su.comultiply(su.parse_lin("gamma*")) == phi_gs);
  CHECK(su.comultiply(su.parse_lin("1")) == tensor2(su, {{"1", "1", "1"}}));
  const Presentation& u1 = *g.u1;
  for (int k = 1; k <= 4; ++k) {
    std::string zk = "z^" + std::to_string(k);
    CHECK(u1.comultiply(u1.parse_lin(zk)) == tensor2(u1, {{"1", zk.c_str(), zk.c_str()}}));
  }
}

TEST_CASE("structure maps on generators") {
  Groups g;
  const Presentation& su = *g.su;
  CHECK(su.counit(su.parse_lin("alpha gamma*")).is_zero());
  CHECK(su.counit(su.parse_lin("alpha*^3")).is_one());
  CHECK(su.antipode(su.parse_lin("gamma")) == su.parse_lin("-mu*gamma"));
  CHECK(su.antipode(su.parse_lin("gamma*")) == su.parse_lin("-mu^-1*gamma*"));
  CHECK(su.antipode(su.parse_lin("alpha")) == su.parse_lin("alpha*"));
  const Presentation& u1 = *g.u1;
  CHECK(u1.antipode(u1.parse_lin("z")) == u1.parse_lin("z*"));
}

TEST_CASE("adjoint action") {
  Groups g;
  const Presentation& su = *g.su;
  const Presentation& u1 = *g.u1;
  CHECK(su.adjoint(su.parse_lin("1")) == tensor2(su, {{"1", "1", "1"}}));
  CHECK(u1.adjoint(u1.parse_lin("z")) == tensor2(u1, {{"1", "z", "1"}}));
  Sweedler ad = su.adjoint(su.parse_lin("alpha"));
  Lin back;
  for (const auto& [k, c] : ad.terms) add_term(back, k[0], c * su.counit(k[1]));
  CHECK(back == su.parse_lin("alpha"));
}

TEST_CASE("validate_axioms: built-in groups pass") {
  Groups g;
  AxiomReport su = g.su->validate_axioms(3);
  for (const auto& f : su.failures) MESSAGE(f.axiom << " @ " << f.witness);
  CHECK(su.ok());
  CHECK(su.checks > 100);
  AxiomReport u1 = g.u1->validate_axioms(5);
  CHECK(u1.ok());
}

TEST_CASE("validate_axioms: corrupted coproduct of gamma is caught") {
  Groups g;
  Presentation bad = *g.su;
  int gamma = bad.gen_index("gamma");
  bad.set_coproduct(gamma, tensor2(bad, {{"1", "gamma", "alpha"}}));
  AxiomReport rep = bad.validate_axioms(1);
  CHECK_FALSE(rep.ok());
  bool witness_gamma = false;
  for (const auto& f : rep.failures)
    if (f.axiom == "coassociativity" && f.witness == "gamma") witness_gamma = true;
  CHECK(witness_gamma);
}

TEST_CASE("confluence: critical pairs of the built-in systems join, a broken system is reported") {
  Groups g;
  CHECK(g.su->check_confluence().empty());
  CHECK(g.u1->check_confluence().empty());
  // aa -> b, ab -> a: the overlap aab reduces to bb and to b
  Presentation toy("toy", {"a", "b"}, {0, 1}, {{Word{0, 0}, Lin{{Word{1}, Scalar(1)}}}, {Word{0, 1}, Lin{{Word{0}, Scalar(1)}}}});
  CHECK_FALSE(toy.check_confluence().empty());
}

TEST_CASE("restriction morphism j") {
  Groups g;
  HopfMorphism j = g.j();
  const Presentation& su = *g.su;
  const Presentation& u1 = *g.u1;
  CHECK(j(su.parse("alpha")) == u1.parse("z"));
  CHECK(j(su.parse("gamma")).is_zero());
  CHECK(j(su.parse("gamma*")).is_zero());
  CHECK(j(su.parse("alpha alpha*")) == u1.one());
  AxiomReport rep = j.validate(3);
  for (const auto& f : rep.failures) MESSAGE(f.axiom << " @ " << f.witness);
  CHECK(rep.ok());
}

TEST_CASE("render/parse round trip for algebra elements") {
  Groups g;
  const Presentation& su = *g.su;
  for (const char* s : {"alpha* gamma^2 gamma*", "1-mu^2*gamma gamma*", "(1+mu)/(1-mu)*alpha^2-i*gamma*^3"}) {
    HopfElement x = su.parse(s);
    CHECK_MESSAGE(su.parse(x.str()) == x, s << " -> " << x.str());
  }
  CHECK_THROWS_AS(su.parse("alpha/gamma"), ParseError);
  CHECK_THROWS_AS(su.parse("beta"), ParseError);
  CHECK_THROWS_AS(su.parse("gamma^-1"), ParseError);
}

TEST_CASE("property: normal form is independent of bracketing") {
  Groups g;
  const Presentation& su = *g.su;
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> gen(0, 3), len(1, 6);
  for (int it = 0; it < 60; ++it) {
    Word w(len(rng));
    for (int& x : w) x = gen(rng);
    Lin direct = su.normal_form(w);
    // left-to-right and right-to-left products of single letters
    Lin l{{Word{}, Scalar(1)}}, r{{Word{}, Scalar(1)}};
    for (int x : w) l = su.mul(l, Lin{{Word{x}, Scalar(1)}});
    for (auto x = w.rbegin(); x != w.rend(); ++x) r = su.mul(Lin{{Word{*x}, Scalar(1)}}, r);
    CHECK(l == direct);
    CHECK(r == direct);
    // random split point
    size_t cut = std::uniform_int_distribution<size_t>(0, w.size())(rng);
    Lin a = su.normal_form(Word(w.begin(), w.begin() + cut));
    Lin b = su.normal_form(Word(w.begin() + cut, w.end()));
    CHECK(su.mul(a, b) == direct);
  }
}

TEST_CASE("property: coproduct is coassociative on random elements and a homomorphism") {
  Groups g;
  const Presentation& su = *g.su;
  std::mt19937 rng(9);
  auto mons = su.normal_monomials(3);
  std::uniform_int_distribution<size_t> pick(0, mons.size() - 1);
  std::uniform_int_distribution<int> coef(-3, 3);
  auto cop_leg = [&](const Word& w) { return su.coproduct(w); };
  for (int it = 0; it < 12; ++it) {
    Lin a, b;
    for (int k = 0; k < 3; ++k) {
      add_term(a, mons[pick(rng)], Scalar(coef(rng)));
      add_term(b, mons[pick(rng)], Scalar(coef(rng)));
    }
    Sweedler pa = su.comultiply(a);
    CHECK(su.map_leg(pa, 0, cop_leg, 2) == su.map_leg(pa, 1, cop_leg, 2));
    CHECK(su.comultiply(su.mul(a, b)) == su.tensor_mul(pa, su.comultiply(b)));
  }
}

TEST_CASE("property: j intertwines counit, antipode and coproduct on monomials") {
  Groups g;
  HopfMorphism j = g.j();
  const Presentation& su = *g.su;
  const Presentation& u1 = *g.u1;
  for (const Word& m : su.normal_monomials(3)) {
    Lin jm = j.apply(m);
    CHECK(u1.counit(jm) == su.counit(m));
    CHECK(u1.antipode(jm) == j.apply(su.antipode(m)));
  }
}
