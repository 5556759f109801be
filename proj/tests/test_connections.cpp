#include "doctest.h"
#include "qpb/connections.hpp"
#include "qpb/errors.hpp"

using namespace qpb;

namespace {

struct Hopf3d {
  std::shared_ptr<Calculus> psi = builtin_calculus("3d");
  std::shared_ptr<Calculus> u1 = builtin_calculus("u1-from-3d");
  std::shared_ptr<FormAlgebra> gf = std::make_shared<FormAlgebra>(u1, FormAlgebra::Mode::Exterior, 3);
  HopfMorphism j = hopf_fibration_map(psi->group(), u1->group());
  HomogeneousBundle hb = make_homogeneous_bundle(psi, gf, j, {Calculus::unit_form(psi->basis_index("eta"))}, 3);
  std::shared_ptr<const Bundle> B = hb.bundle;
  Connection w = Connection::canonical(hb.bundle);
};

const Hopf3d& hopf3d() {
  static Hopf3d h;
  return h;
}

struct FourDPlus {
  std::shared_ptr<Calculus> psi = builtin_calculus("4d+");
  std::shared_ptr<Calculus> u1 = builtin_calculus("u1-from-4d+");
  std::shared_ptr<FormAlgebra> gf = std::make_shared<FormAlgebra>(u1, FormAlgebra::Mode::Exterior, 3);
  std::shared_ptr<FormAlgebra> pf = std::make_shared<FormAlgebra>(psi, FormAlgebra::Mode::Exterior, 3);
  std::shared_ptr<const Bundle> B =
      std::make_shared<Bundle>(make_full_bundle(pf, gf, hopf_fibration_map(psi->group(), u1->group())));
  // omega(zeta) = eta + t xi with xi = tau + (1-mu^3)/(1+mu) eta
  Connection at(const std::string& t) const {
    std::string text = "(1+(" + t + ")*(1-mu^3)/(1+mu))*eta+(" + t + ")*tau";
    return Connection(B, "omega_t", {B->total().parse("1", text)});
  }
};

const FourDPlus& four() {
  static FourDPlus f;
  return f;
}

std::shared_ptr<const Bundle> trivial(const std::string& calc, const std::string& base, const Params& p = {}, int cap = 3,
                                      FormAlgebra::Mode mode = FormAlgebra::Mode::Envelope) {
  auto c = builtin_calculus(calc, p);
  auto gf = std::make_shared<FormAlgebra>(c, mode, cap);
  return std::make_shared<Bundle>(make_trivial_bundle(load_base(builtin_pack(base), cap), gf));
}

Connection with_potential(std::shared_ptr<const Bundle> B, const std::string& A) {
  return Connection::from_potential(B, {B->total().parse("1", A)});
}

FormMap single(const VH& x) { return FormMap{x}; }

// The conjugate map phi*(t) = phi(t*)*.
FormMap conj_map(const Bundle& B, const FormMap& phi) {
  FormMap out;
  for (int t = 0; t < B.gamma().dim(); ++t) {
    VH v;
    for (const auto& [w, c] : B.gamma().star(Calculus::unit_form(t))) axpy(v, phi[w[0]], c);
    out.push_back(B.total().star(v));
  }
  return out;
}

// Horizontal samples: generators and their pairwise products within the cap.
std::vector<VH> hor_samples(const Bundle& B) {
  std::vector<VH> gens = hor_generators(B);
  std::vector<VH> out = gens;
  for (const VH& a : gens)
    for (const VH& b : gens)
      if (std::max(vh_degree(a), 0) + std::max(vh_degree(b), 0) + 2 <= B.total().cap()) out.push_back(B.total().mul(a, b));
  return out;
}

}  // namespace

TEST_CASE("Hopf fibration: canonical connection and its curvature") {
  const auto& h = hopf3d();
  const Bundle& B = *h.B;
  CHECK(h.w(0) == B.total().parse("1", "zeta"));
  FormMap R = curvature(h.w);
  CHECK(R[0] == B.total().parse("1", "mu*(1+mu^2)*em*ep"));
  CHECK(is_tensorial(B, R));
  for (const VH& r : R) CHECK(B.is_horizontal(r));
  // R = D omega through the horizontal projection
  FormMap dw = form_d(B, h.w.form());
  for (size_t t = 0; t < R.size(); ++t) CHECK(horizontal_project(h.w, dw[t]) == R[t]);
}

TEST_CASE("Hopf fibration: canonical connection is regular and multiplicative") {
  const auto& h = hopf3d();
  DefectReport reg = regularity_sweep(h.w);
  CHECK(reg.ok());
  CHECK(reg.tested.size() == 6);
  DefectReport mult = multiplicativity_sweep(h.w);
  CHECK(mult.ok());
  CHECK_FALSE(mult.tested.empty());
}

TEST_CASE("Hopf fibration: covariant derivative") {
  const auto& h = hopf3d();
  const Bundle& B = *h.B;
  const TwistedAlgebra& T = B.total();
  CHECK(covariant_derivative(h.w, T.parse("alpha", "1")) == T.parse("-mu*gamma*", "ep"));
  // D on the base algebra is d
  VH gg = T.parse("gamma gamma*", "1");
  CHECK(covariant_derivative(h.w, gg) == T.d(gg));
  FormMap R = curvature(h.w);
  for (const VH& phi : hor_samples(B)) {
    CAPTURE(B.render(phi));
    VH D = covariant_derivative(h.w, phi);
    CHECK(B.is_horizontal(D));
    CHECK(extended_derivative(h.w, phi) == D);
    CHECK(covariant_derivative(h.w, T.star(phi)) == T.star(D));
    // covariance: F^ D = (D (x) id) F^
    std::map<Word, VH> lhs, rhs;
    for (const auto& [p, c] : B.fwedge(D)) lhs[c.begin()->first] = p;
    for (const auto& [p, c] : B.fwedge(phi)) {
      VH v = covariant_derivative(h.w, p);
      if (!v.empty()) rhs[c.begin()->first] = v;
    }
    CHECK(lhs == rhs);
    // multiplicative omega: D^2 phi = -sum phi_k R pi(c_k)
    if (std::max(vh_degree(phi), 0) + 2 <= T.cap()) {
      VH expect;
      for (const auto& [p, c] : B.fwedge(phi)) {
        VH r;
        for (const auto& [w, cw] : B.gamma().pi(c)) axpy(r, R[w[0]], cw);
        axpy(expect, T.mul(p, r), Scalar(-1));
      }
      CHECK(covariant_derivative(h.w, D) == expect);
    }
  }
}

TEST_CASE("Hopf fibration: Leibniz rule for the covariant derivative") {
  const auto& h = hopf3d();
  const Bundle& B = *h.B;
  const TwistedAlgebra& T = B.total();
  std::vector<VH> gens = hor_generators(B);
  for (const VH& a : gens)
    for (const VH& b : gens) {
      int da = std::max(vh_degree(a), 0), db = std::max(vh_degree(b), 0);
      if (da + db + 1 > T.cap()) continue;
      VH lhs = covariant_derivative(h.w, T.mul(a, b));
      VH rhs = T.mul(covariant_derivative(h.w, a), b);
      axpy(rhs, T.mul(a, covariant_derivative(h.w, b)), da % 2 ? Scalar(-1) : Scalar(1));
      CHECK(lhs == rhs);
    }
}

TEST_CASE("Hopf fibration: Bianchi identity and q_omega") {
  const auto& h = hopf3d();
  BianchiResult b = bianchi(h.w);
  CHECK(b.equal());
  CHECK(form_zero(b.left));
  CHECK(form_zero(b.right));
  FormMap R = curvature(h.w);
  CHECK(q_omega(h.w, R) == q_omega_via_defect(h.w, R));
  CHECK(form_zero(q_omega(h.w, R)));
  CHECK(covariant_derivative(h.w, R) == FormMap{covariant_derivative(h.w, R[0])});
}

TEST_CASE("Hopf fibration: Weil evaluation on zeta") {
  const auto& h = hopf3d();
  WeilReport rep = weil_eval(h.w, Calculus::unit_form(0));
  CHECK(rep.value == h.B->total().parse("1", "mu*(1+mu^2)*em*ep"));
  CHECK(rep.invariant);
  CHECK(rep.in_base);
  CHECK(rep.closed);
  CHECK(rep.sigma_invariant);
}

TEST_CASE("Hopf fibration: infinitesimal gauge transformations") {
  const auto& h = hopf3d();
  const Bundle& B = *h.B;
  const TwistedAlgebra& T = B.total();
  for (const char* z : {"1", "gamma gamma*"}) {
    CAPTURE(z);
    FormMap zeta = single(T.parse(z, "1"));
    REQUIRE(is_gauge(B, zeta));
    CHECK(gauge_iota(B, zeta, h.w(0)) == zeta[0]);
    CHECK(gauge_contract_star(h.w, zeta, h.w(0)) == zeta[0]);
    // l(omega) = d zeta + [omega, zeta]
    CHECK(gauge_lie(B, zeta, h.w(0)) == form_add(form_d(B, zeta), bracket_comm(B, h.w.form(), zeta))[0]);
    CHECK(gauge_lie(B, zeta, T.parse("alpha", "1")) == T.mul(T.parse("1/(1+mu^2)*alpha", "1"), zeta[0]));
    for (const VH& phi : hor_samples(B)) {
      CAPTURE(B.render(phi));
      CHECK(gauge_iota(B, zeta, phi).empty());
      CHECK(gauge_contract_star(h.w, zeta, phi).empty());
      VH expect;
      for (const auto& [p, c] : B.fwedge(phi)) {
        VH v;
        for (const auto& [w, cw] : B.gamma().pi(c)) axpy(v, zeta[w[0]], cw);
        axpy(expect, T.mul(p, v), Scalar(1));
      }
      CHECK(gauge_lie(B, zeta, phi) == expect);
      CHECK(gauge_lie_star(h.w, zeta, phi) == expect);
    }
  }
  CHECK_FALSE(is_gauge(B, single(T.parse("alpha", "1"))));
  CHECK_THROWS_AS(gauge_iota(B, single(T.parse("alpha", "1")), h.w(0)), InvalidInput);
}

TEST_CASE("4D+ family: connection law with a formal parameter") {
  const auto& f = four();
  Connection w = f.at("t");
  const TwistedAlgebra& T = f.B->total();
  CHECK(f.B->is_horizontal(T.parse("1", "tau+(1-mu^3)/(1+mu)*eta")));
  FormMap R = curvature(w);
  CHECK(R[0] == T.parse("1", "(mu*t/(1-mu^2)+mu/((1-mu)*(1-mu^3)))*(tau*eta+eta*tau)"));
  CHECK(is_tensorial(*f.B, R));
  CHECK(f.B->is_horizontal(R[0]));
}

TEST_CASE("4D+ family: multiplicative exactly at one parameter value") {
  const auto& f = four();
  Connection w = f.at("t");
  DefectReport rep = multiplicativity_sweep(w);
  REQUIRE(rep.tested.size() == 1);
  VH defect = multiplicativity_defect(w, f.u1->ideal()[0]);
  REQUIRE(defect.size() == 1);
  auto [num, den] = defect.begin()->second.as_fraction_in(kT);
  REQUIRE(num.size() == 2);  // linear in t
  Scalar root = -num[0] / num[1];
  CHECK(root == Scalar::parse("-(1+mu)/(1-mu^3)"));
  Connection special = f.at("-(1+mu)/(1-mu^3)");
  CHECK(multiplicativity_sweep(special).ok());
  CHECK(form_zero(curvature(special)));
  CHECK_FALSE(multiplicativity_sweep(f.at("0")).ok());
}

TEST_CASE("4D+ family: never regular") {
  const auto& f = four();
  for (const char* t : {"t", "0", "-(1+mu)/(1-mu^3)"}) {
    CAPTURE(t);
    DefectReport rep = regularity_sweep(f.at(t));
    CHECK_FALSE(rep.ok());
  }
  // the tested horizontal generators: four base generators, ep, em, xi
  CHECK(hor_generators(*f.B).size() == 7);
  CHECK_THROWS_AS(weil_eval(f.at("t"), Calculus::unit_form(0)), InvalidInput);
}

TEST_CASE("4D+ family: Bianchi identity and q_omega cross-check") {
  const auto& f = four();
  Connection w = f.at("t");
  BianchiResult b = bianchi(w);
  CHECK(b.equal());
  FormMap R = curvature(w);
  CHECK(q_omega(w, R) == q_omega_via_defect(w, R));
  FormMap xi = single(f.B->total().parse("1", "tau+(1-mu^3)/(1+mu)*eta"));
  CHECK(is_tensorial(*f.B, xi));
  CHECK(q_omega(w, xi) == q_omega_via_defect(w, xi));
}

TEST_CASE("classical calculus: flat, regular and multiplicative") {
  auto psi = builtin_calculus("3d");
  auto u1 = builtin_calculus("u1-classical");
  auto gf = std::make_shared<FormAlgebra>(u1, FormAlgebra::Mode::Envelope, 3);
  HopfMorphism j = hopf_fibration_map(psi->group(), u1->group());
  auto B = std::make_shared<Bundle>(omega_build(degenerate_hor_data(psi->group_ptr(), j, 1), gf));
  const TwistedAlgebra& T = B->total();
  Connection w = Connection::canonical(B);
  VH tau = w(0);
  CHECK(T.mul(tau, tau).empty());
  CHECK(T.d(tau).empty());
  for (const VH& x : twisted_samples(T, true)) {
    if (x.empty() || vh_degree(x) + 1 > T.cap()) continue;
    CAPTURE(T.render(x));
    CHECK(T.mul(tau, x) == scaled(T.mul(x, tau), vh_degree(x) % 2 ? Scalar(-1) : Scalar(1)));
  }
  CHECK(regularity_sweep(w).ok());
  CHECK(multiplicativity_sweep(w).ok());
  CHECK(form_zero(curvature(w)));
  WeilReport rep = weil_eval(w, Lin{{Word{0, 0}, Scalar(1)}});
  CHECK(rep.value.empty());
}

TEST_CASE("line bundle: envelope of the U(1) calculus") {
  for (bool symbolic : {true, false}) {
    Params p;
    if (!symbolic) p[kLambda] = Scalar(2);
    auto c = builtin_calculus("u1-line", p);
    FormAlgebra env(c, FormAlgebra::Mode::Envelope, 3);
    REQUIRE(env.envelope_generators().size() == 1);
    CHECK(env.envelope_generators()[0] == Lin{{Word{0, 0}, Scalar(1)}});
    CHECK(env.algebra().dim(2) == 0);
  }
}

TEST_CASE("line bundle: regularity and multiplicativity") {
  auto B = trivial("u1-line", "default");
  const TwistedAlgebra& T = B->total();
  Connection w0 = Connection::canonical(B);
  CHECK(regularity_sweep(w0).ok());
  CHECK(multiplicativity_sweep(w0).ok());
  CHECK(form_zero(curvature(w0)));
  // omega(zeta) phi = (-1)^deg lambda^k phi omega(zeta) for phi of coaction degree k
  for (const char* base : {"z", "z^2", "z*"}) {
    int k = std::string(base) == "z" ? 1 : std::string(base) == "z^2" ? 2 : -1;
    Scalar lk = Scalar::lambda().pow(k);
    for (const char* form : {"1", "e1"}) {
      VH phi = T.parse(base, form);
      Scalar s = std::string(form) == "1" ? Scalar(1) : Scalar(-1);
      CHECK(T.mul(w0(0), phi) == scaled(T.mul(phi, w0(0)), s * lk));
    }
  }
  Connection wa = with_potential(B, "i*e1");
  CHECK(multiplicativity_sweep(wa).ok());
  CHECK(T.mul(wa(0), wa(0)).empty());
  DefectReport reg = regularity_sweep(wa);
  CHECK_FALSE(reg.ok());
  CHECK(form_zero(curvature(wa)));
}

TEST_CASE("line bundle: nonzero omega squared breaks multiplicativity") {
  auto B = trivial("u1-line", "nilpotent");
  Connection w = with_potential(B, "i*x");
  VH sq = B->total().mul(w(0), w(0));
  CHECK(sq == B->total().parse("1", "-x*x"));
  DefectReport rep = multiplicativity_sweep(w);
  REQUIRE(rep.defects.size() == 1);
  CHECK(rep.defects[0].witness == "z*+z/lambda-(1+1/lambda)");
  // r(a) is proportional to omega(zeta)^2
  VH r = multiplicativity_defect(w, B->gamma().ideal()[0]);
  CHECK(r == scaled(sq, Scalar::parse("1/(1+lambda)")));
}

TEST_CASE("brackets: delta bracket on a U(1) bundle") {
  auto B = trivial("u1-from-3d", "nilpotent");
  Connection w = with_potential(B, "i*x");
  FormMap ww = bracket_delta(*B, w.form(), w.form());
  VH sq = B->total().mul(w(0), w(0));
  CHECK(ww[0] == scaled(sq, Scalar::parse("-(1-mu^2)/(1+mu^2)")));
  CHECK(form_zero(bracket_comm(*B, w.form(), w.form())));
  // <phi, psi>* = -(-1)^{ij} <psi*, phi*>
  CHECK(conj_map(*B, ww) == bracket_delta(*B, conj_map(*B, w.form()), conj_map(*B, w.form())));
  // trivial omega_0: <omega_0, omega_0> = 1 (x) d theta = 0 for U(1)
  Connection w0 = Connection::canonical(B);
  CHECK(form_zero(bracket_delta(*B, w0.form(), w0.form())));
}

TEST_CASE("trivial bundles: Bianchi with a nonzero potential") {
  auto B = trivial("u1-line", "heisenberg", {{kLambda, Scalar(2)}}, 4);
  Connection w = with_potential(B, "i*e3+i*e1");
  FormMap R = curvature(w);
  CHECK(R[0] == B->total().parse("1", "i*e1*e2"));
  BianchiResult b = bianchi(w);
  CHECK(b.equal());
  CHECK(q_omega(w, R) == q_omega_via_defect(w, R));
  // covariant derivative on the base is d
  for (const char* f : {"e1", "e3", "e1*e3"}) CHECK(covariant_derivative(w, B->total().parse("1", f)) == B->total().d(B->total().parse("1", f)));
}

TEST_CASE("transgression on trivial bundles") {
  for (const char* base : {"default", "heisenberg"}) {
    CAPTURE(base);
    auto B = trivial("u1-classical", base, {}, 4);
    Connection w0 = Connection::canonical(B);
    Connection tau = with_potential(B, std::string(base) == "default" ? "i*e1" : "i*e3");
    for (const Lin& t : {Calculus::unit_form(0), Lin{{Word{0, 0}, Scalar(1)}}}) {
      TransgressionResult tr = transgress(w0, tau, t);
      CHECK(tr.derivative_law);
      CHECK(tr.residual.empty());
      TransgressionResult same = transgress(w0, w0, t);
      CHECK(same.psi_integral.empty());
      CHECK(same.residual.empty());
    }
    TransgressionResult one = transgress(w0, tau, Calculus::unit_form(0));
    CHECK(one.psi_integral == form_add(tau.form(), w0.form(), Scalar(-1))[0]);
  }
  auto H = trivial("u1-classical", "heisenberg", {}, 4);
  Connection tau = with_potential(H, "i*e3");
  CHECK(curvature(tau)[0] == H->total().parse("1", "i*e1*e2"));
}

TEST_CASE("transgression rejects non-regular endpoints") {
  auto B = trivial("u1-line", "default");
  CHECK_THROWS_AS(transgress(Connection::canonical(B), with_potential(B, "i*e1"), Calculus::unit_form(0)), InvalidInput);
}

TEST_CASE("connection construction errors") {
  auto B = trivial("u1-line", "default");
  const TwistedAlgebra& T = B->total();
  CHECK_THROWS_AS(Connection(B, "bad", {T.parse("1", "2*zeta")}), InvalidInput);
  CHECK_THROWS_AS(Connection(B, "bad", {T.parse("1", "zeta+e1")}), InvalidInput);
  CHECK_THROWS_AS(Connection(B, "bad", {T.parse("1", "zeta*e1")}), InvalidInput);
}

TEST_CASE("gauge operators on a trivial bundle") {
  auto B = trivial("u1-classical", "heisenberg", {}, 3);
  const TwistedAlgebra& T = B->total();
  Connection w = with_potential(B, "i*e3");
  FormMap zeta = single(T.parse("1", "1"));
  FormMap xi = single(T.parse("2", "1"));
  REQUIRE(is_gauge(*B, zeta));
  CHECK(gauge_iota(*B, zeta, w(0)) == zeta[0]);
  CHECK(gauge_contract_star(w, zeta, w(0)) == zeta[0]);
  for (const VH& x : twisted_samples(T, true)) {
    if (x.empty()) continue;
    CAPTURE(T.render(x));
    VH a = gauge_contract_star(w, zeta, gauge_contract_star(w, xi, x));
    axpy(a, gauge_contract_star(w, xi, gauge_contract_star(w, zeta, x)), Scalar(1));
    CHECK(a.empty());
  }
}
