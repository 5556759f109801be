#include "qpb/connections.hpp"

#include "qpb/errors.hpp"

namespace qpb {

namespace {

Scalar sign_of(long k) { return k % 2 ? Scalar(-1) : Scalar(1); }

Lin unit_word(const Word& w, const Scalar& c = Scalar(1)) { return Lin{{w, c}}; }

// Splits a form word of a split bundle into its horizontal prefix and the
// Gamma indices of its vertical suffix.
std::pair<Word, Word> split_word(const Bundle& B, const Word& y) {
  std::map<int, int> gamma_of;
  for (size_t t = 0; t < B.vertical().size(); ++t) gamma_of[B.vertical()[t]] = static_cast<int>(t);
  size_t cut = y.size();
  while (cut > 0 && gamma_of.count(y[cut - 1])) --cut;
  Word hor(y.begin(), y.begin() + static_cast<long>(cut)), vert;
  for (size_t i = cut; i < y.size(); ++i) vert.push_back(gamma_of.at(y[i]));
  for (int g : hor)
    if (gamma_of.count(g)) throw InvalidInput("form word is not in (horizontal)(vertical) order");
  return {hor, vert};
}

VH2 varpi_image(const Bundle& B, const FormMap& phi, int t) {
  VH2 out;
  const auto& row = B.gamma().varpi_row(t);
  for (size_t u = 0; u < row.size(); ++u)
    for (const auto& [a, c] : row[u])
      for (const auto& [k, cv] : phi[u]) add_term(out, std::array<Word, 4>{k.first, k.second, a, Word{}}, c * cv);
  return out;
}

VH apply_map(const FormMap& phi, const Lin& gamma_form) {
  VH out;
  for (const auto& [w, c] : gamma_form) {
    if (w.size() != 1) throw InvalidInput("expected a degree-one Gamma form");
    axpy(out, phi[w[0]], c);
  }
  return out;
}

// sum phi(x^1) psi(x^2) over a Gamma tensor of degree two.
VH pair_apply(const Bundle& B, const FormMap& phi, const FormMap& psi, const Lin& two) {
  VH out;
  for (const auto& [w, c] : two) axpy(out, B.total().mul(phi[w[0]], psi[w[1]]), c);
  return out;
}

}  // namespace

int form_degree(const FormMap& phi) {
  for (const VH& x : phi)
    if (!x.empty()) return vh_degree(x);
  return 0;
}

FormMap form_add(const FormMap& a, const FormMap& b, const Scalar& c) {
  FormMap out = a;
  for (size_t t = 0; t < b.size(); ++t) axpy(out[t], b[t], c);
  return out;
}

FormMap form_scaled(const FormMap& a, const Scalar& c) {
  FormMap out;
  for (const VH& x : a) out.push_back(scaled(x, c));
  return out;
}

bool form_zero(const FormMap& a) {
  for (const VH& x : a)
    if (!x.empty()) return false;
  return true;
}

VH map_coefficients(const VH& x, const std::function<Scalar(const Scalar&)>& f) {
  VH out;
  for (const auto& [k, c] : x) add_term(out, k, f(c));
  return out;
}

// ---------------------------------------------------------------------------
// Connection

Connection::Connection(std::shared_ptr<const Bundle> bundle, std::string name, FormMap omega)
    : bundle_(std::move(bundle)), name_(std::move(name)), omega_(std::move(omega)) {
  const Bundle& B = *bundle_;
  const int n = B.gamma().dim();
  if (static_cast<int>(omega_.size()) != n) throw InvalidInput("connection '" + name_ + "' needs one value per Gamma basis element");
  for (auto& x : omega_) x = B.total().reduce(x);
  for (int t = 0; t < n; ++t) {
    const std::string& tn = B.gamma().basis()[t];
    if (!omega_[t].empty() && vh_degree(omega_[t]) != 1) throw InvalidInput("connection '" + name_ + "' is not of degree one at " + tn);
    VH2 expect = varpi_image(B, omega_, t);
    add_term(expect, std::array<Word, 4>{Word{}, Word{}, Word{}, Word{t}}, Scalar(1));
    if (B.fhat(omega_[t]) != expect) throw InvalidInput("connection '" + name_ + "' violates the connection law at " + tn);
  }
  if (!is_hermitian(B, omega_)) throw InvalidInput("connection '" + name_ + "' is not hermitian");
}

Connection Connection::canonical(std::shared_ptr<const Bundle> bundle) {
  FormMap w;
  for (int t = 0; t < bundle->gamma().dim(); ++t) w.push_back(bundle->vertical_form(Calculus::unit_form(t)));
  return Connection(bundle, "canonical", w);
}

Connection Connection::from_potential(std::shared_ptr<const Bundle> bundle, const FormMap& A) {
  const Bundle& B = *bundle;
  const int n = B.gamma().dim();
  if (static_cast<int>(A.size()) != n) throw InvalidInput("potential needs one value per Gamma basis element");
  if (&B.total().base() != &B.group()) throw InvalidInput("gauge potentials need a trivial bundle");
  FormMap w;
  for (int t = 0; t < n; ++t) {
    VH x = B.vertical_form(Calculus::unit_form(t));
    const auto& row = B.gamma().varpi_row(t);
    for (int u = 0; u < n; ++u)
      for (const auto& [a, c] : row[u]) axpy(x, B.total().mul(A[u], vh_term(a, Word{})), c);
    w.push_back(x);
  }
  return Connection(bundle, "potential", w);
}

VH Connection::apply(const Lin& gamma_form) const { return apply_map(omega_, gamma_form); }

VH Connection::apply_word(const Word& w) const {
  VH out = vh_term(Word{}, Word{});
  for (int t : w) out = bundle_->total().mul(out, omega_[t]);
  return out;
}

Connection Connection::toward(const Connection& other) const {
  FormMap phi = form_add(other.form(), omega_, Scalar(-1));
  return Connection(bundle_, name_ + "+t*(" + other.name() + "-" + name_ + ")", form_add(omega_, phi, Scalar::t()));
}

bool is_tensorial(const Bundle& B, const FormMap& phi) {
  for (int t = 0; t < B.gamma().dim(); ++t)
    if (B.fhat(phi[t]) != varpi_image(B, phi, t)) return false;
  return true;
}

bool is_hermitian(const Bundle& B, const FormMap& phi) {
  for (int t = 0; t < B.gamma().dim(); ++t)
    if (apply_map(phi, B.gamma().star(Calculus::unit_form(t))) != B.total().star(phi[t])) return false;
  return true;
}

FormMap bracket_delta(const Bundle& B, const FormMap& phi, const FormMap& psi) {
  FormMap out;
  for (int t = 0; t < B.gamma().dim(); ++t) out.push_back(pair_apply(B, phi, psi, B.gamma().delta(t)));
  return out;
}

FormMap bracket_comm(const Bundle& B, const FormMap& phi, const FormMap& psi) {
  FormMap out;
  for (int t = 0; t < B.gamma().dim(); ++t) out.push_back(pair_apply(B, phi, psi, B.gamma().ctop(t)));
  return out;
}

FormMap form_d(const Bundle& B, const FormMap& phi) {
  FormMap out;
  for (const VH& x : phi) out.push_back(B.total().d(x));
  return out;
}

FormMap curvature(const Connection& w) {
  const Bundle& B = w.bundle();
  return form_add(form_d(B, w.form()), bracket_delta(B, w.form(), w.form()), Scalar(-1));
}

VH covariant_derivative(const Connection& w, const VH& phi) {
  const Bundle& B = w.bundle();
  VH out = B.total().d(phi);
  std::map<int, VH> by_degree;
  for (const auto& [k, c] : phi) add_term(by_degree[static_cast<int>(k.second.size())], k, c);
  for (const auto& [deg, part] : by_degree)
    for (const auto& [pk, ck] : B.fwedge(part)) axpy(out, B.total().mul(pk, w.apply(B.gamma().pi(ck))), -sign_of(deg));
  return out;
}

FormMap covariant_derivative(const Connection& w, const FormMap& phi) {
  const Bundle& B = w.bundle();
  return form_add(form_d(B, phi), bracket_comm(B, phi, w.form()), -sign_of(form_degree(phi)));
}

std::map<Word, VH> vh_decompose(const Connection& w, const VH& x) {
  const Bundle& B = w.bundle();
  if (!B.split()) throw InvalidInput("horizontal projection needs a split bundle");
  std::map<Word, VH> out;
  VH pending = B.total().reduce(x);
  for (int guard = 0; !pending.empty(); ++guard) {
    if (guard > 64) throw InvalidInput("vertical decomposition does not terminate");
    VH next;
    for (const auto& [k, c] : pending) {
      auto [hor, vert] = split_word(B, k.second);
      VH phi = vh_term(k.first, hor, c);
      axpy(out[vert], phi, Scalar(1));
      if (vert.empty()) continue;
      VH rest = w.apply_word(vert);
      Word vy;
      for (int t : vert) vy.push_back(B.vertical()[t]);
      axpy(rest, vh_term(Word{}, vy), Scalar(-1));
      axpy(next, B.total().mul(phi, rest), Scalar(-1));
    }
    pending = std::move(next);
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.empty() ? out.erase(it) : std::next(it);
  return out;
}

VH horizontal_project(const Connection& w, const VH& x) {
  auto parts = vh_decompose(w, x);
  auto it = parts.find(Word{});
  return it == parts.end() ? VH{} : it->second;
}

VH extended_derivative(const Connection& w, const VH& x) { return horizontal_project(w, w.bundle().total().d(x)); }

VH regularity_defect(const Connection& w, int t, const VH& phi) {
  const Bundle& B = w.bundle();
  VH out = B.total().mul(w(t), phi);
  int deg = std::max(vh_degree(phi), 0);
  for (const auto& [pk, ck] : B.fwedge(phi))
    axpy(out, B.total().mul(pk, w.apply(B.gamma().circ(Calculus::unit_form(t), ck))), -sign_of(deg));
  return out;
}

VH multiplicativity_defect(const Connection& w, const Lin& a) {
  const Bundle& B = w.bundle();
  const Calculus& G = B.gamma();
  VH out;
  for (const auto& [legs, c] : G.group().comultiply(a).terms) {
    VH l = w.apply(G.pi(legs[0]));
    if (l.empty()) continue;
    axpy(out, B.total().mul(l, w.apply(G.pi(legs[1]))), c);
  }
  return out;
}

FormMap q_omega(const Connection& w, const FormMap& phi) {
  const Bundle& B = w.bundle();
  Scalar s = sign_of(form_degree(phi));
  FormMap out = bracket_delta(B, w.form(), phi);
  out = form_add(out, bracket_delta(B, phi, w.form()), -s);
  return form_add(out, bracket_comm(B, phi, w.form()), -s);
}

FormMap q_omega_via_defect(const Connection& w, const FormMap& phi) {
  const Bundle& B = w.bundle();
  FormMap out;
  for (int t = 0; t < B.gamma().dim(); ++t) {
    VH x;
    for (const auto& [word, c] : B.gamma().delta(t)) axpy(x, regularity_defect(w, word[0], phi[word[1]]), c);
    out.push_back(x);
  }
  return out;
}

std::vector<VH> hor_generators(const Bundle& B) {
  std::vector<VH> out;
  for (int g = 0; g < B.total().base().ngens(); ++g) out.push_back(vh_term(Word{g}, Word{}));
  if (B.split()) {
    for (int y = 0; y < B.total().forms().ngens(); ++y)
      if (!B.is_vertical_gen(y)) out.push_back(vh_term(Word{}, Word{y}));
  } else {
    for (const VH& x : B.horizontal_basis(1, 0)) out.push_back(x);
  }
  return out;
}

DefectReport regularity_sweep(const Connection& w) {
  const Bundle& B = w.bundle();
  DefectReport rep;
  for (const VH& phi : hor_generators(B)) {
    if (1 + std::max(vh_degree(phi), 0) > B.total().cap()) continue;
    for (int t = 0; t < B.gamma().dim(); ++t) {
      std::string wit = B.gamma().basis()[t] + " | " + B.render(phi);
      rep.tested.push_back(wit);
      VH v = regularity_defect(w, t, phi);
      if (!v.empty()) rep.defects.push_back({"regularity", wit, B.render(v)});
    }
  }
  return rep;
}

DefectReport multiplicativity_sweep(const Connection& w) {
  const Bundle& B = w.bundle();
  DefectReport rep;
  const auto& ideal = B.gamma().ideal();
  for (size_t i = 0; i < ideal.size(); ++i) {
    std::string wit = B.gamma().ideal_text().size() == ideal.size() ? B.gamma().ideal_text()[i] : B.group().render(ideal[i]);
    rep.tested.push_back(wit);
    VH v = multiplicativity_defect(w, ideal[i]);
    if (!v.empty()) rep.defects.push_back({"multiplicativity", wit, B.render(v)});
  }
  return rep;
}

BianchiResult bianchi(const Connection& w) {
  const Bundle& B = w.bundle();
  FormMap R = curvature(w);
  BianchiResult out;
  FormMap DR;
  for (const VH& r : R) DR.push_back(covariant_derivative(w, r));
  out.left = form_add(DR, q_omega(w, R), Scalar(-1));
  FormMap ww = bracket_delta(B, w.form(), w.form());
  out.right = form_add(bracket_delta(B, w.form(), ww), bracket_delta(B, ww, w.form()), Scalar(-1));
  return out;
}

// ---------------------------------------------------------------------------
// Characteristic classes

VH curvature_tensor_eval(const Connection& w, const Lin& t) {
  const Bundle& B = w.bundle();
  FormMap R = curvature(w);
  VH out;
  for (const auto& [word, c] : t) {
    VH acc = vh_term(Word{}, Word{});
    for (int g : word) {
      acc = B.total().mul(acc, R[g]);
      if (acc.empty()) break;
    }
    axpy(out, acc, c);
  }
  return out;
}

namespace {

bool gamma_invariant(const Calculus& G, const Lin& t) {
  Coact expect;
  for (const auto& [w, c] : t) add_term(expect, std::make_pair(w, Word{}), c);
  return G.varpi(t) == expect;
}

}  // namespace

WeilReport weil_eval(const Connection& w, const Lin& t) {
  const Bundle& B = w.bundle();
  WeilReport rep;
  rep.invariant = gamma_invariant(B.gamma(), t);
  if (!rep.invariant) throw InvalidInput("Weil evaluation needs an invariant element");
  if (!regularity_sweep(w).ok()) throw InvalidInput("Weil evaluation needs a regular connection");
  rep.value = curvature_tensor_eval(w, t);
  rep.in_base = B.fhat(rep.value) == Bundle::tensor_one(rep.value);
  rep.closed = rep.value.empty() || vh_degree(rep.value) + 1 > B.total().cap() || B.total().d(rep.value).empty();
  rep.sigma_invariant = true;
  int k = t.empty() ? 0 : static_cast<int>(t.begin()->first.size());
  for (int pos = 0; pos + 1 < k; ++pos)
    if (curvature_tensor_eval(w, B.gamma().sigma_at(t, pos)) != rep.value) rep.sigma_invariant = false;
  return rep;
}

TransgressionResult transgress(const Connection& omega, const Connection& tau, const Lin& t) {
  const Bundle& B = omega.bundle();
  if (!regularity_sweep(omega).ok() || !regularity_sweep(tau).ok()) throw InvalidInput("transgression needs regular endpoints");
  if (!gamma_invariant(B.gamma(), t)) throw InvalidInput("transgression needs an invariant element");
  FormMap phi = form_add(tau.form(), omega.form(), Scalar(-1));
  Connection wt = omega.toward(tau);
  FormMap Rt = curvature(wt);

  TransgressionResult out;
  out.derivative_law = true;
  FormMap Dphi = covariant_derivative(wt, phi);
  for (size_t g = 0; g < Rt.size(); ++g) {
    VH dR = map_coefficients(Rt[g], [](const Scalar& c) { return c.diff(kT); });
    if (dR != Dphi[g]) out.derivative_law = false;
  }

  VH psi;
  for (const auto& [word, c] : t)
    for (size_t i = 0; i < word.size(); ++i) {
      VH acc = vh_term(Word{}, Word{});
      for (size_t j = 0; j < word.size(); ++j) acc = B.total().mul(acc, j == i ? phi[word[j]] : Rt[word[j]]);
      axpy(psi, acc, c);
    }
  out.psi_integral = map_coefficients(psi, [](const Scalar& c) { return c.integrate01(kT); });
  out.residual = curvature_tensor_eval(tau, t);
  axpy(out.residual, curvature_tensor_eval(omega, t), Scalar(-1));
  axpy(out.residual, B.total().d(out.psi_integral), Scalar(-1));
  return out;
}

// ---------------------------------------------------------------------------
// Gauge operators

bool is_gauge(const Bundle& B, const FormMap& zeta) {
  if (static_cast<int>(zeta.size()) != B.gamma().dim()) return false;
  for (const VH& z : zeta)
    for (const auto& [k, c] : z)
      if (!k.second.empty()) return false;
  return is_tensorial(B, zeta);
}

VH gauge_iota(const Bundle& B, const FormMap& zeta, const VH& x) {
  if (!is_gauge(B, zeta)) throw InvalidInput("not an infinitesimal gauge transformation");
  const Presentation& A = B.group();
  VH out;
  for (const auto& [key, c] : x) {
    Scalar s = -sign_of(static_cast<long>(key.second.size()));
    for (const auto& [k, cf] : B.fhat(vh_term(key.first, key.second))) {
      if (k[3].size() != 1) continue;
      Scalar e = A.counit(k[2]);
      if (e.is_zero()) continue;
      axpy(out, B.total().mul(vh_term(k[0], k[1]), zeta[k[3][0]]), s * c * cf * e);
    }
  }
  return out;
}

VH gauge_lie(const Bundle& B, const FormMap& zeta, const VH& x) {
  VH out = B.total().d(gauge_iota(B, zeta, x));
  axpy(out, gauge_iota(B, zeta, B.total().d(x)), Scalar(1));
  return out;
}

VH gauge_contract_star(const Connection& w, const FormMap& zeta, const VH& x) {
  const Bundle& B = w.bundle();
  if (!is_gauge(B, zeta)) throw InvalidInput("not an infinitesimal gauge transformation");
  const FormAlgebra& GF = B.group_forms();
  VH out;
  for (const auto& [vert, phi] : vh_decompose(w, x)) {
    int dphi = std::max(vh_degree(phi), 0);
    for (size_t i = 0; i < vert.size(); ++i) {
      Word before(vert.begin(), vert.begin() + static_cast<long>(i));
      Word after(vert.begin() + static_cast<long>(i) + 1, vert.end());
      Scalar s = sign_of(dphi + static_cast<long>(i));
      // (1 (x) before)(b (x) 1) = sum b_k (x) (before o c_k), F(b) = sum b_k (x) c_k
      for (const auto& [bk, cb] : zeta[vert[i]]) {
        for (const auto& [f, cf] : B.F(unit_word(bk.first))) {
          Lin moved = before.empty() ? unit_word(Word{}, B.group().counit(f.second)) : GF.calculus().circ(unit_word(before), unit_word(f.second));
          for (const auto& [mw, cm] : moved) {
            VH tail = w.apply_word(concat(mw, after));
            VH term = B.total().mul(B.total().mul(phi, vh_term(f.first, Word{})), tail);
            axpy(out, term, s * cb * cf * cm);
          }
        }
      }
    }
  }
  return out;
}

VH gauge_lie_star(const Connection& w, const FormMap& zeta, const VH& x) {
  const Bundle& B = w.bundle();
  VH out = B.total().d(gauge_contract_star(w, zeta, x));
  axpy(out, gauge_contract_star(w, zeta, B.total().d(x)), Scalar(1));
  return out;
}

}  // namespace qpb
