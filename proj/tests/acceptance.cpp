// Acceptance run: one PASS/FAIL line per criterion.
// Every comparison is exact equality over Q(i)(mu)(lambda)(t); the only
// numeric thresholds are the runtime budgets below.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "qpb/connections.hpp"
#include "qpb/errors.hpp"
#include "qpb/packs.hpp"

using namespace qpb;

namespace {

constexpr double kAxiomBudgetSeconds = 10.0;
constexpr double kTotalBudgetSeconds = 120.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

struct Hopf3d {
  std::shared_ptr<Calculus> psi = builtin_calculus("3d");
  std::shared_ptr<Calculus> u1 = builtin_calculus("u1-from-3d");
  std::shared_ptr<FormAlgebra> gf;
  HopfMorphism j = hopf_fibration_map(psi->group(), u1->group());
  HomogeneousBundle hb;
  explicit Hopf3d(int cap)
      : gf(std::make_shared<FormAlgebra>(u1, FormAlgebra::Mode::Exterior, cap)),
        hb(make_homogeneous_bundle(psi, gf, j, {Calculus::unit_form(psi->basis_index("eta"))}, cap)) {}
};

std::shared_ptr<const Bundle> trivial(const std::string& calc, const std::string& base, int cap, const Params& p = {}) {
  auto c = builtin_calculus(calc, p);
  auto gf = std::make_shared<FormAlgebra>(c, FormAlgebra::Mode::Envelope, cap);
  return std::make_shared<Bundle>(make_trivial_bundle(load_base(builtin_pack(base), cap), gf));
}

Connection potential(std::shared_ptr<const Bundle> B, const std::string& A) {
  return Connection::from_potential(B, {B->total().parse("1", A)});
}

VH sigma_words(const Calculus& c, const Lin& x, const std::vector<int>& positions) {
  Lin y = x;
  for (int p : positions) y = c.sigma_at(y, p);
  return vh_from_forms(y);
}

// ---------------------------------------------------------------------------

void c1(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  AxiomReport s = builtin_group("suq2")->validate_axioms(3);
  AxiomReport u = builtin_group("u1")->validate_axioms(5);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(s.ok(), "SU_mu(2) axioms at degree 3");
  o.require(u.ok(), "U(1) axioms at degree 5");
  o.require(secs < kAxiomBudgetSeconds, "runtime budget");
  o.detail << (o.pass ? "" : "; ") << s.checks << "+" << u.checks << " checks";
}

void c2(Outcome& o) {
  auto c = builtin_calculus("3d");
  const Presentation& G = c->group();
  o.require(c->ideal().size() == 6, "six ideal generators");
  for (const Lin& r : c->ideal()) o.require(c->pi(r).empty(), "pi annihilates " + G.render(r));
  std::vector<Word> mons = G.normal_monomials(2);
  int n = 0;
  for (int i = 0; i < c->dim(); ++i)
    for (const Word& a : mons)
      for (const Word& b : mons) {
        Lin la{{a, Scalar(1)}}, lb{{b, Scalar(1)}};
        Lin e = Calculus::unit_form(i);
        o.require(c->circ(c->circ(e, la), lb) == c->circ(e, G.mul(la, lb)), "module law at " + c->basis()[i]);
        ++n;
      }
  o.detail << (o.pass ? "" : "; ") << n << " module-law triples";
}

void c3(Outcome& o) {
  Hopf3d h(3);
  const TwistedAlgebra& T = h.hb.bundle->total();
  VH target = T.parse("1", "mu*(1+mu^2)*em*ep");
  o.require(h.hb.hor.R[0] == h.hb.Lstar->parse("mu*(1+mu^2)*em*ep"), "R from the horizontal data");
  o.require(curvature(Connection::canonical(h.hb.bundle))[0] == target, "R = d omega - <omega, omega>");
  o.detail << (o.pass ? "" : "; ") << "R(zeta) = " << T.render(target);
}

void c4(Outcome& o) {
  Hopf3d h(3);
  const GradedAlgebra& L = *h.hb.Lstar;
  for (const char* r : {"ep*ep", "em*em", "ep*em+mu^2*em*ep"}) o.require(L.reduce(L.parse(r)).empty(), r);
  o.require(L.dim(2) == 1, "L* degree 2 has dimension 1");
  o.require(L.new_relations(2).size() == 3, "three L* relations");
  const GradedAlgebra& F = h.hb.bundle->total().forms();
  for (const char* r : {"zeta*zeta", "zeta*ep+mu^-4*ep*zeta", "zeta*em+mu^4*em*zeta"}) o.require(F.reduce(F.parse(r)).empty(), r);
  o.require(F.dim(2) == 3, "interior algebra degree 2 has dimension 3");
  o.require(F.new_relations(2).size() == 6, "six degree-2 relations in total");
}

Connection omega_t(std::shared_ptr<const Bundle> B, const Scalar& t) {
  const TwistedAlgebra& T = B->total();
  Scalar mu = Scalar::mu();
  VH w = scaled(T.parse("1", "eta"), Scalar(1) + t * (Scalar(1) - mu.pow(3)) / (Scalar(1) + mu));
  axpy(w, T.parse("1", "tau"), t);
  return Connection(B, "omega_t", {w});
}

void c5(Outcome& o) {
  auto psi = builtin_calculus("4d+");
  auto u1 = builtin_calculus("u1-from-4d+");
  auto gf = std::make_shared<FormAlgebra>(u1, FormAlgebra::Mode::Exterior, 3);
  auto pf = std::make_shared<FormAlgebra>(psi, FormAlgebra::Mode::Exterior, 3);
  auto B = std::make_shared<Bundle>(make_full_bundle(pf, gf, hopf_fibration_map(psi->group(), u1->group())));
  const TwistedAlgebra& T = B->total();
  Scalar mu = Scalar::mu(), t = Scalar::t();
  Scalar special = -(Scalar(1) + mu) / (Scalar(1) - mu.pow(3));

  Connection w = omega_t(B, t);
  Scalar c = mu * t / (Scalar(1) - mu.pow(2)) + mu / ((Scalar(1) - mu) * (Scalar(1) - mu.pow(3)));
  o.require(curvature(w)[0] == scaled(T.parse("1", "tau*eta+eta*tau"), c), "curvature formula");
  VH r = multiplicativity_defect(w, u1->ideal()[0]);
  bool linear_with_root = false;
  if (r.size() == 1) {
    auto [num, den] = r.begin()->second.as_fraction_in(kT);
    linear_with_root = num.size() == 2 && -num[0] / num[1] == special;
  }
  o.require(linear_with_root, "defect linear in t with root -(1+mu)/(1-mu^3)");
  Connection ws = omega_t(B, special);
  o.require(multiplicativity_sweep(ws).ok(), "multiplicative at the root");
  o.require(form_zero(curvature(ws)), "flat at the root");
  o.require(!regularity_sweep(w).ok(), "regularity defect nonzero for symbolic t");
}

void c6(Outcome& o) {
  auto psi = builtin_calculus("3d");
  auto u1 = builtin_calculus("u1-classical");
  const int cap = 4;
  auto gf = std::make_shared<FormAlgebra>(u1, FormAlgebra::Mode::Envelope, cap);
  HopfMorphism j = hopf_fibration_map(psi->group(), u1->group());
  auto B = std::make_shared<Bundle>(omega_build(degenerate_hor_data(psi->group_ptr(), j, 1), gf));
  const TwistedAlgebra& T = B->total();
  Connection w = Connection::canonical(B);
  VH tau = w(0);
  o.require(T.mul(tau, tau).empty(), "tau^2 = 0");
  o.require(T.d(tau).empty(), "d tau = 0");
  int n = 0;
  for (const Word& b : T.base().normal_monomials(2))
    for (int k = 0; k + 1 <= cap; ++k)
      for (const Word& y : T.forms().normal_words(k)) {
        VH x = vh_term(b, y);
        o.require(T.mul(tau, x) == scaled(T.mul(x, tau), k % 2 ? Scalar(-1) : Scalar(1)), "tau w = (-1)^deg w tau at " + T.render(x));
        ++n;
      }
  o.require(regularity_sweep(w).ok(), "regular");
  o.require(multiplicativity_sweep(w).ok(), "multiplicative");
  o.require(form_zero(curvature(w)), "R = 0");
  o.detail << (o.pass ? "" : "; ") << n << " graded-commutation samples";
}

void c7(Outcome& o) {
  auto sym = builtin_calculus("u1-line");
  FormAlgebra env(sym, FormAlgebra::Mode::Envelope, 3);
  o.require(env.envelope_generators().size() == 1 && env.envelope_generators()[0] == Lin{{Word{0, 0}, Scalar(1)}},
            "envelope ideal in degree 2 is spanned by zeta zeta");
  o.require(env.algebra().dim(2) == 0, "degree 2 of the envelope vanishes");

  // multiplicativity iff omega(zeta)^2 = 0
  struct Case {
    const char* base;
    const char* A;
  };
  for (Case c : {Case{"default", "0"}, Case{"default", "i*e1"}, Case{"default", "i*e1+i*e2"}, Case{"nilpotent", "i*x"},
                 Case{"heisenberg", "i*e3"}}) {
    auto B = trivial("u1-line", c.base, 3);
    Connection w = potential(B, c.A);
    bool sq_zero = B->total().mul(w(0), w(0)).empty();
    o.require(multiplicativity_sweep(w).ok() == sq_zero, std::string("multiplicativity vs omega^2 over ") + c.base + " with A = " + c.A);
  }

  // omega(zeta) phi = (-1)^deg lambda^k phi omega(zeta) on coaction-homogeneous phi
  auto B = trivial("u1-line", "default", 3);
  const TwistedAlgebra& T = B->total();
  Connection w0 = Connection::canonical(B);
  for (auto [base, k] : std::vector<std::pair<const char*, long>>{{"z", 1}, {"z^2", 2}, {"z^3", 3}, {"z*", -1}, {"z*^2", -2}, {"z z*", 0}})
    for (const char* form : {"1", "e1", "e2", "e1*e2"}) {
      VH phi = T.parse(base, form);
      Scalar s = (std::string(form) == "e1" || std::string(form) == "e2") ? Scalar(-1) : Scalar(1);
      o.require(T.mul(w0(0), phi) == scaled(T.mul(phi, w0(0)), s * Scalar::lambda().pow(k)),
                std::string("regularity relation at ") + base + " (x) " + form);
    }
}

void c8(Outcome& o) {
  const int cap = 4;
  // d^2 = 0 on the total calculi, d_v^2 = 0, (d^)^2 = 0
  Hopf3d h(cap);
  auto psi = builtin_calculus("4d+");
  auto u14 = builtin_calculus("u1-from-4d+");
  auto B4 = std::make_shared<Bundle>(make_full_bundle(std::make_shared<FormAlgebra>(psi, FormAlgebra::Mode::Exterior, cap),
                                                      std::make_shared<FormAlgebra>(u14, FormAlgebra::Mode::Exterior, cap),
                                                      hopf_fibration_map(psi->group(), u14->group())));
  auto Bh = trivial("u1-line", "heisenberg", cap, {{kLambda, Scalar(2)}});
  for (const Bundle* B : std::vector<const Bundle*>{h.hb.bundle.get(), B4.get(), Bh.get()}) {
    const TwistedAlgebra& T = B->total();
    for (const VH& x : twisted_samples(T, true)) {
      if (x.empty() || std::max(vh_degree(x), 0) + 2 > T.cap()) continue;
      o.require(T.d(T.d(x)).empty(), "d^2 = 0 on " + B->name() + " at " + T.render(x));
      VH2 f = B->fhat(x);
      o.require(B->d2(B->d2(f)).empty(), "(d^)^2 = 0 on " + B->name() + " at " + T.render(x));
    }
  }
  VerAlgebra ver(h.psi->group_ptr(), h.j, h.gf);
  for (const Word& b : h.psi->group().normal_monomials(2))
    for (const Word& y : {Word{}, Word{0}}) {
      VH x = vh_term(b, y);
      o.require(ver.d(ver.d(x)).empty(), "d_v^2 = 0");
    }

  // braid equation and A_{k+l} = (A_k (x) A_l) A_{kl}
  for (const char* id : {"3d", "4d+", "u1-from-3d", "u1-from-4d+", "u1-line", "u1-classical"}) {
    auto c = builtin_calculus(id);
    if (!c->bicovariant()) continue;
    FormAlgebra fa(c, FormAlgebra::Mode::Exterior, cap);
    for (const Word& w : all_words(c->dim(), 3)) {
      Lin x{{w, Scalar(1)}};
      o.require(sigma_words(*c, x, {0, 1, 0}) == sigma_words(*c, x, {1, 0, 1}), std::string("braid equation on ") + id);
    }
    for (int n = 2; n <= cap; ++n)
      for (int k = 1; k < n; ++k)
        for (const Word& w : all_words(c->dim(), n)) {
          Lin x{{w, Scalar(1)}};
          o.require(fa.antisym(x) == fa.antisym_pair(k, n - k, fa.antisym_shuffle(k, n - k, x)),
                    std::string("antisymmetrizer factorization on ") + id);
        }
  }

  // Bianchi with independently computed sides; R = D omega
  Connection wh = Connection::canonical(h.hb.bundle);
  auto Bp = trivial("u1-line", "heisenberg", cap, {{kLambda, Scalar(2)}});
  Connection wp = potential(Bp, "i*e3+i*e1");
  o.require(!form_zero(curvature(wp)), "nonzero curvature for the potential");
  for (const Connection* w : {&wh, &wp}) {
    BianchiResult b = bianchi(*w);
    o.require(b.equal(), "Bianchi on " + w->bundle().name());
    FormMap R = curvature(*w);
    FormMap dw = form_d(w->bundle(), w->form());
    for (size_t t = 0; t < R.size(); ++t) o.require(horizontal_project(*w, dw[t]) == R[t], "R = D omega on " + w->bundle().name());
  }
}

void c9(Outcome& o) {
  Hopf3d h(3);
  Bundle rebuilt = omega_build(h.hb.hor, h.gf);
  auto B = std::make_shared<Bundle>(rebuilt);
  o.require(B->validate().ok(), "rebuilt bundle axioms");
  Connection w = Connection::canonical(B);
  o.require(regularity_sweep(w).ok(), "zero regularity defects");
  o.require(multiplicativity_sweep(w).ok(), "zero multiplicativity defects");
  const TwistedAlgebra& T = B->total();
  VH from_D = curvature_from_D(*B, h.hb.translation(h.u1->group().parse_lin("z")));
  // pi(z) = zeta/(1+mu^2)
  VH expect = scaled(T.parse("1", "mu*(1+mu^2)*em*ep"), (Scalar(1) + Scalar::mu().pow(2)).inv());
  o.require(from_D == expect, "curvature from D reproduces R(zeta)");
  o.require(curvature(w)[0] == T.parse("1", "mu*(1+mu^2)*em*ep"), "curvature of the rebuilt bundle");

  VerAlgebra ver(h.psi->group_ptr(), h.j, h.gf);
  Bundle deg = omega_build(degenerate_hor_data(h.psi->group_ptr(), h.j, h.u1->dim()), h.gf);
  const TwistedAlgebra& D = deg.total();
  std::vector<VH> samples = twisted_samples(D, true);
  for (const char* b : {"alpha+alpha*", "gamma gamma*", "alpha gamma+gamma*"}) samples.push_back(D.parse(b, "1"));
  for (const VH& a : samples) {
    o.require(ver.d(a) == D.d(a), "d_v on " + D.render(a));
    o.require(ver.star(a) == D.star(a), "star on " + D.render(a));
    for (const VH& b : samples)
      if (std::max(vh_degree(a), 0) + std::max(vh_degree(b), 0) <= D.cap()) o.require(ver.mul(a, b) == D.mul(a, b), "product");
  }
}

void c10(Outcome& o) {
  auto B = trivial("u1-classical", "default", 4);
  std::vector<Connection> conns = {Connection::canonical(B), potential(B, "i*e1"), potential(B, "i*e2"), potential(B, "i*e1+2*i*e2")};
  for (const Connection& w : conns) o.require(regularity_sweep(w).ok(), "endpoint regular");
  const std::vector<Lin> thetas = {Calculus::unit_form(0), Lin{{Word{0, 0}, Scalar(1)}}};
  int n = 0;
  for (size_t a = 0; a < conns.size(); ++a)
    for (size_t b = 0; b < conns.size(); ++b) {
      if (a == b) continue;
      for (const Lin& th : thetas) {
        TransgressionResult tr = transgress(conns[a], conns[b], th);
        o.require(tr.derivative_law, "d/dt R_t = D_t(phi)");
        o.require(tr.residual.empty(), "integrated residual is 0");
        ++n;
      }
    }
  o.detail << (o.pass ? "" : "; ") << n << " transgressions";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"Hopf axioms on SU_mu(2) (degree 3) and U(1) (degree 5)", c1},
      {"3D calculus: ideal annihilated, module law", c2},
      {"Hopf fibration curvature R(zeta) = mu(1+mu^2) em ep", c3},
      {"L* and interior-algebra relations", c4},
      {"4D+ family: curvature, multiplicativity root, regularity", c5},
      {"classical calculus: tau, flatness, regular, multiplicative", c6},
      {"line bundle: envelope, multiplicativity, regularity relation", c7},
      {"structural suites at cap 4", c8},
      {"reconstruction round trip", c9},
      {"transgression on the trivial default bundle", c10},
  };
  auto start = std::chrono::steady_clock::now();
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::cout << "criterion " << (i + 1) << " [" << criteria[i].first << "]: " << (o.pass ? "PASS" : "FAIL");
    std::string d = o.detail.str();
    if (!d.empty()) std::cout << " (" << d << ")";
    std::cout << " " << std::fixed;
    std::cout.precision(2);
    std::cout << secs << "s\n";
  }
  double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool in_budget = total < kTotalBudgetSeconds;
  std::cout << "runtime budget " << kTotalBudgetSeconds << "s: " << (in_budget ? "PASS" : "FAIL") << " (" << total << "s)\n";
  return failed == 0 && in_budget ? 0 : 1;
}
