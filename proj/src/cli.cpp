#include "qpb/cli.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "qpb/connections.hpp"
#include "qpb/errors.hpp"
#include "qpb/packs.hpp"

namespace qpb {

namespace {

const std::vector<std::string> kScenarios = {"hopf-3d", "hopf-4dplus", "hopf-classical", "line-bundle", "trivial-default"};

Params params_of(const ScenarioConfig& cfg) {
  Params p;
  if (!cfg.lambda.empty()) {
    Scalar l = parse_scalar_param(cfg.lambda, {});
    if (l == Scalar(-1) || l.is_zero()) throw InvalidInput("lambda must differ from 0 and -1");
    p[kLambda] = l;
  }
  return p;
}

std::optional<Scalar> mu_point(const ScenarioConfig& cfg) {
  if (cfg.mu_value.empty()) return std::nullopt;
  Scalar m = Scalar::parse(cfg.mu_value);
  if (!m.is_const() || !m.constant().is_real()) throw InvalidInput("--mu-value must be a rational number");
  return m;
}

FormAlgebra::Mode mode_or(const ScenarioConfig& cfg, FormAlgebra::Mode fallback) {
  return cfg.mode.empty() ? fallback : FormAlgebra::parse_mode(cfg.mode);
}

VH subst_mu(const VH& x, const Scalar& m) {
  return map_coefficients(x, [&m](const Scalar& c) { return c.subst(kMu, m); });
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }
const char* pass_fail(bool b) { return b ? "pass" : "fail"; }

// Collects quantities, checks and connection sections of one report.
class Builder {
 public:
  Builder(std::string command, std::string subject, const ScenarioConfig& cfg) : mu_(mu_point(cfg)) {
    body_["command"] = std::move(command);
    body_["subject"] = std::move(subject);
    OJson c;
    c["cap"] = cfg.cap;
    if (!cfg.mode.empty()) c["mode"] = cfg.mode;
    if (!cfg.lambda.empty()) c["lambda"] = cfg.lambda;
    if (!cfg.mu_value.empty()) c["mu_value"] = cfg.mu_value;
    body_["config"] = c;
    body_["summary"] = "";
    body_["quantities"] = OJson::array();
    body_["checks"] = OJson::array();
    body_["connections"] = OJson::array();
  }

  void config(const std::string& key, const OJson& v) { body_["config"][key] = v; }
  void summary(const std::string& s) { body_["summary"] = s; }

  void info(const std::string& name, const std::string& value) { body_["quantities"].push_back({{"name", name}, {"value", value}}); }

  void text_target(const std::string& name, const std::string& value, const std::string& target) {
    OJson q = {{"name", name}, {"value", value}, {"target", target}, {"match", value == target}};
    if (value != target) fail_ = true;
    body_["quantities"].push_back(q);
  }

  bool vh_target(const std::string& name, const TwistedAlgebra& T, const VH& value, const VH& target) {
    OJson q = {{"name", name}, {"value", T.render(value)}, {"target", T.render(target)}, {"match", value == target}};
    if (value != target) {
      fail_ = true;
      q["diff"] = T.render(sum(value, target, Scalar(-1)));
    }
    if (mu_) q["spot_check"] = spot([&] { return subst_mu(value, *mu_) == subst_mu(target, *mu_); });
    body_["quantities"].push_back(q);
    return value == target;
  }

  void scalar_target(const std::string& name, const Scalar& value, const Scalar& target) {
    OJson q = {{"name", name}, {"value", value.str()}, {"target", target.str()}, {"match", value == target}};
    if (!(value == target)) {
      fail_ = true;
      q["diff"] = (value - target).str();
    }
    if (mu_) q["spot_check"] = spot([&] { return value.subst(kMu, *mu_) == target.subst(kMu, *mu_); });
    body_["quantities"].push_back(q);
  }

  void check(const std::string& name, bool pass, const std::string& detail = "") {
    OJson c = {{"name", name}, {"result", pass_fail(pass)}};
    if (!detail.empty()) c["detail"] = detail;
    if (!pass) fail_ = true;
    body_["checks"].push_back(c);
  }

  void axioms(const std::string& name, const AxiomReport& r) {
    OJson c = {{"name", name}, {"result", pass_fail(r.ok())}, {"tested", r.checks}, {"failed", r.failures.size()}};
    OJson f = OJson::array();
    for (size_t i = 0; i < r.failures.size() && i < 10; ++i)
      f.push_back({{"axiom", r.failures[i].axiom}, {"witness", r.failures[i].witness}, {"detail", r.failures[i].detail}});
    if (!f.empty()) c["failures"] = f;
    if (!r.ok()) fail_ = true;
    body_["checks"].push_back(c);
  }

  void connection(OJson c, bool ok) {
    if (!ok) fail_ = true;
    body_["connections"].push_back(std::move(c));
  }

  Report finish() {
    body_["status"] = fail_ ? "fail" : "pass";
    return {body_, fail_ ? 1 : 0};
  }

 private:
  OJson body_;
  std::optional<Scalar> mu_;
  bool fail_ = false;

  std::string spot(const std::function<bool()>& f) {
    try {
      bool ok = f();
      if (!ok) fail_ = true;
      return ok ? "match" : "mismatch";
    } catch (const PoleError&) {
      return "pole";
    }
  }
};

// ---------------------------------------------------------------------------
// Connection sections

std::string render_map(const Bundle& B, const FormMap& phi) {
  std::string out;
  for (size_t t = 0; t < phi.size(); ++t) {
    if (t) out += "; ";
    out += B.gamma().basis()[t] + ": " + B.render(phi[t]);
  }
  return out;
}

bool leibniz_holds(const Connection& w) {
  const Bundle& B = w.bundle();
  const TwistedAlgebra& T = B.total();
  for (const VH& a : hor_generators(B))
    for (const VH& b : hor_generators(B)) {
      int da = std::max(vh_degree(a), 0), db = std::max(vh_degree(b), 0);
      if (da + db + 1 > T.cap()) continue;
      VH rhs = T.mul(covariant_derivative(w, a), b);
      axpy(rhs, T.mul(a, covariant_derivative(w, b)), da % 2 ? Scalar(-1) : Scalar(1));
      if (covariant_derivative(w, T.mul(a, b)) != rhs) return false;
    }
  return true;
}

bool d_hermitian(const Connection& w) {
  const TwistedAlgebra& T = w.bundle().total();
  for (const VH& a : hor_generators(w.bundle()))
    if (std::max(vh_degree(a), 0) + 1 <= T.cap() && covariant_derivative(w, T.star(a)) != T.star(covariant_derivative(w, a)))
      return false;
  return true;
}

struct ConnectionFacts {
  OJson json;
  bool regular = false;
  bool multiplicative = false;
  bool identities = true;
};

// Connection report: {connection, tested_set, defects, curvature, checks}.
ConnectionFacts describe(const Connection& w) {
  const Bundle& B = w.bundle();
  ConnectionFacts f;
  DefectReport reg = regularity_sweep(w);
  DefectReport mult = multiplicativity_sweep(w);
  f.regular = reg.ok();
  f.multiplicative = mult.ok();
  FormMap R = curvature(w);

  OJson tested = OJson::array();
  for (const auto& s : reg.tested) tested.push_back("regularity " + s);
  for (const auto& s : mult.tested) tested.push_back("multiplicativity " + s);
  OJson defects = OJson::array();
  for (const auto* rep : {&reg, &mult})
    for (const Defect& d : rep->defects) defects.push_back({{"kind", d.kind}, {"witness", d.witness}, {"value", d.value}});

  OJson checks;
  auto put = [&](const std::string& k, bool v) {
    checks[k] = pass_fail(v);
    if (!v) f.identities = false;
  };
  BianchiResult b = bianchi(w);
  put("bianchi", b.equal());
  put("q_omega", q_omega(w, R) == q_omega_via_defect(w, R));
  put("curvature_tensorial", is_tensorial(B, R));
  if (B.split() && f.multiplicative) {
    FormMap dw = form_d(B, w.form());
    bool rd = true;
    for (size_t t = 0; t < R.size(); ++t) rd = rd && horizontal_project(w, dw[t]) == R[t];
    put("rd", rd);
  }
  if (f.regular) {
    put("leibniz", leibniz_holds(w));
    put("d_hermitian", d_hermitian(w));
  }

  f.json = {{"connection", w.name()},
            {"tested_set", tested},
            {"defects", defects},
            {"curvature", render_map(B, R)},
            {"regular", yes_no(f.regular)},
            {"multiplicative", yes_no(f.multiplicative)},
            {"checks", checks}};
  return f;
}

// ---------------------------------------------------------------------------
// Scenario data

struct Hopf3d {
  std::shared_ptr<Calculus> psi;
  std::shared_ptr<Calculus> u1;
  std::shared_ptr<FormAlgebra> gf;
  HomogeneousBundle hb;
};

Hopf3d build_hopf3d(const ScenarioConfig& cfg) {
  Hopf3d h;
  h.psi = builtin_calculus("3d");
  h.u1 = builtin_calculus("u1-from-3d");
  h.gf = std::make_shared<FormAlgebra>(h.u1, mode_or(cfg, FormAlgebra::Mode::Exterior), cfg.cap);
  HopfMorphism j = hopf_fibration_map(h.psi->group(), h.u1->group());
  h.hb = make_homogeneous_bundle(h.psi, h.gf, j, {Calculus::unit_form(h.psi->basis_index("eta"))}, cfg.cap);
  return h;
}

std::shared_ptr<const Bundle> build_4dplus(const ScenarioConfig& cfg) {
  auto psi = builtin_calculus("4d+");
  auto u1 = builtin_calculus("u1-from-4d+");
  auto gf = std::make_shared<FormAlgebra>(u1, mode_or(cfg, FormAlgebra::Mode::Exterior), cfg.cap);
  auto pf = std::make_shared<FormAlgebra>(psi, FormAlgebra::Mode::Exterior, cfg.cap);
  return std::make_shared<Bundle>(make_full_bundle(pf, gf, hopf_fibration_map(psi->group(), u1->group())));
}

// omega(zeta) = eta + t xi, xi = tau + (1-mu^3)/(1+mu) eta.
Connection connection_4dplus(std::shared_ptr<const Bundle> B, const Scalar& t) {
  const TwistedAlgebra& T = B->total();
  Scalar mu = Scalar::mu();
  VH w = scaled(T.parse("1", "eta"), Scalar(1) + t * (Scalar(1) - mu.pow(3)) / (Scalar(1) + mu));
  axpy(w, T.parse("1", "tau"), t);
  return Connection(B, "omega_t", {w});
}

Scalar special_t() {
  Scalar mu = Scalar::mu();
  return -(Scalar(1) + mu) / (Scalar(1) - mu.pow(3));
}

std::shared_ptr<const Bundle> build_classical(const ScenarioConfig& cfg) {
  auto psi = builtin_calculus("3d");
  auto u1 = builtin_calculus("u1-classical");
  auto gf = std::make_shared<FormAlgebra>(u1, mode_or(cfg, FormAlgebra::Mode::Envelope), cfg.cap);
  HopfMorphism j = hopf_fibration_map(psi->group(), u1->group());
  return std::make_shared<Bundle>(omega_build(degenerate_hor_data(psi->group_ptr(), j, u1->dim()), gf));
}

std::shared_ptr<Calculus> calculus_of(const ScenarioConfig& cfg, const std::string& fallback) {
  if (!cfg.pack.empty()) {
    Json pack = resolve_pack(cfg.pack);
    if (!pack.contains("calculus")) throw InvalidInput("pack '" + cfg.pack + "' has no calculus section");
    const Json& c = pack.at("calculus");
    std::shared_ptr<Presentation> g = pack.contains("group") ? load_group(pack) : builtin_group(c.at("group").get<std::string>());
    return load_calculus(pack, g, params_of(cfg));
  }
  return builtin_calculus(cfg.calculus.empty() ? fallback : cfg.calculus, params_of(cfg));
}

std::shared_ptr<const Bundle> build_trivial(const ScenarioConfig& cfg, const std::string& calc, const std::string& base,
                                            FormAlgebra::Mode mode) {
  auto c = calculus_of(cfg, calc);
  if (c->group().ngens() != builtin_group("u1")->ngens() || c->dim() != 1)
    throw InvalidInput("trivial bundles are built over a one-dimensional U(1) calculus");
  auto gf = std::make_shared<FormAlgebra>(c, mode_or(cfg, mode), cfg.cap);
  return std::make_shared<Bundle>(make_trivial_bundle(load_base(builtin_pack(base), cfg.cap), gf));
}

std::string line_base(const ScenarioConfig& cfg) { return cfg.omega_sq == "nonzero" ? "nilpotent" : "default"; }

std::shared_ptr<const Bundle> build_line(const ScenarioConfig& cfg) {
  ScenarioConfig c = cfg;
  c.calculus = "u1-line";
  c.pack.clear();
  return build_trivial(c, "u1-line", line_base(cfg), FormAlgebra::Mode::Envelope);
}

std::shared_ptr<const Bundle> build_trivial_default(const ScenarioConfig& cfg) {
  return build_trivial(cfg, "u1-classical", "default", FormAlgebra::Mode::Envelope);
}

Connection potential_connection(std::shared_ptr<const Bundle> B, const std::string& text) {
  return Connection::from_potential(B, {B->total().parse("1", text)});
}

// ---------------------------------------------------------------------------
// Scenarios

Report scenario_hopf3d(const ScenarioConfig& cfg) {
  Builder b("run", "hopf-3d", cfg);
  Hopf3d h = build_hopf3d(cfg);
  const Bundle& B = *h.hb.bundle;
  const TwistedAlgebra& T = B.total();
  const GradedAlgebra& L = *h.hb.Lstar;
  b.config("mode", render_mode(h.gf->mode()));

  for (const char* r : {"ep*ep", "em*em", "ep*em+mu^2*em*ep"}) b.check(std::string("L* relation ") + r + " = 0", L.reduce(L.parse(r)).empty());
  b.text_target("dim L*^2", std::to_string(L.dim(2)), "1");
  const GradedAlgebra& F = T.forms();
  for (const char* r : {"zeta*zeta", "zeta*ep+mu^-4*ep*zeta", "zeta*em+mu^4*em*zeta"})
    b.check(std::string("cross relation ") + r + " = 0", F.reduce(F.parse(r)).empty());
  b.text_target("dims of the interior algebra", std::to_string(F.dim(1)) + " " + std::to_string(F.dim(2)) + " " + std::to_string(F.dim(3)), "3 3 1");

  Connection w = Connection::canonical(h.hb.bundle);
  FormMap R = curvature(w);
  const std::string r_text = "mu*(1+mu^2)*em*ep";
  bool r_match = b.vh_target("R(zeta)", T, R[0], T.parse("1", r_text));
  b.vh_target("R(pi(z)) from the translation map", T, curvature_from_D(B, h.hb.translation(h.u1->group().parse_lin("z"))),
              T.parse("1", "mu*em*ep"));
  b.vh_target("D(alpha)", T, covariant_derivative(w, T.parse("alpha", "1")), T.parse("-mu*gamma*", "ep"));
  b.text_target("dim Omega(M)^0 (base degree <= 2)", std::to_string(B.omega_M_basis(0, 2).size()), "4");

  WeilReport weil = weil_eval(w, Calculus::unit_form(0));
  b.vh_target("Weil(zeta)", T, weil.value, R[0]);
  b.check("Weil(zeta) invariant, in the base, closed", weil.invariant && weil.in_base && weil.closed && weil.sigma_invariant);

  ConnectionFacts f = describe(w);
  b.text_target("regular", yes_no(f.regular), "yes");
  b.text_target("multiplicative", yes_no(f.multiplicative), "yes");
  b.connection(f.json, f.identities);
  b.axioms("bundle axioms", B.validate());
  b.summary("R(zeta) = " + (r_match ? r_text : T.render(R[0])));
  return b.finish();
}

Report scenario_4dplus(const ScenarioConfig& cfg) {
  Builder b("run", "hopf-4dplus", cfg);
  Scalar t = Scalar::parse(cfg.t);
  b.config("t", cfg.t);
  auto B = build_4dplus(cfg);
  const TwistedAlgebra& T = B->total();
  b.check("xi = tau + (1-mu^3)/(1+mu)*eta is horizontal", B->is_horizontal(T.parse("1", "tau+(1-mu^3)/(1+mu)*eta")));
  Connection w = connection_4dplus(B, t);
  FormMap R = curvature(w);
  Scalar mu = Scalar::mu();
  Scalar c = mu * t / (Scalar(1) - mu.pow(2)) + mu / ((Scalar(1) - mu) * (Scalar(1) - mu.pow(3)));
  b.vh_target("curvature", T, R[0], scaled(T.parse("1", "tau*eta+eta*tau"), c));

  // the multiplicativity defect on the family is linear in the parameter
  Connection fam = connection_4dplus(B, Scalar::t());
  VH r = multiplicativity_defect(fam, B->gamma().ideal()[0]);
  if (r.size() == 1 && r.begin()->second.depends_on(kT)) {
    auto [num, den] = r.begin()->second.as_fraction_in(kT);
    if (num.size() == 2) b.scalar_target("multiplicative exactly at t", -num[0] / num[1], special_t());
    else b.check("multiplicativity defect linear in t", false, T.render(r));
  } else {
    b.check("multiplicativity defect linear in t", false, T.render(r));
  }

  ConnectionFacts f = describe(w);
  b.text_target("multiplicative", yes_no(f.multiplicative), yes_no(t == special_t()));
  b.text_target("regular", yes_no(f.regular), "no");
  b.connection(f.json, f.identities);
  b.summary("curvature = " + T.render(R[0]) + "; multiplicative: " + yes_no(f.multiplicative));
  return b.finish();
}

Report scenario_classical(const ScenarioConfig& cfg) {
  Builder b("run", "hopf-classical", cfg);
  auto B = build_classical(cfg);
  const TwistedAlgebra& T = B->total();
  Connection w = Connection::canonical(B);
  VH tau = w(0);
  b.vh_target("tau*tau", T, T.mul(tau, tau), VH{});
  b.vh_target("d tau", T, T.d(tau), VH{});
  bool graded = true;
  std::string witness;
  for (const VH& x : twisted_samples(T, true)) {
    if (x.empty() || vh_degree(x) + 1 > T.cap()) continue;
    if (T.mul(tau, x) != scaled(T.mul(x, tau), vh_degree(x) % 2 ? Scalar(-1) : Scalar(1))) {
      graded = false;
      witness = T.render(x);
      break;
    }
  }
  b.check("tau graded-commutes with the samples", graded, witness);
  ConnectionFacts f = describe(w);
  FormMap R = curvature(w);
  b.vh_target("curvature", T, R[0], VH{});
  b.text_target("regular", yes_no(f.regular), "yes");
  b.text_target("multiplicative", yes_no(f.multiplicative), "yes");
  b.connection(f.json, f.identities);
  b.axioms("bundle axioms", B->validate());
  b.summary("curvature = " + T.render(R[0]) + "; regular: " + yes_no(f.regular) + "; multiplicative: " + yes_no(f.multiplicative));
  return b.finish();
}

Report scenario_line(const ScenarioConfig& cfg) {
  if (cfg.omega_sq != "zero" && cfg.omega_sq != "nonzero") throw InvalidInput("--omega-sq must be zero or nonzero");
  Builder b("run", "line-bundle", cfg);
  b.config("omega_sq", cfg.omega_sq);
  auto B = build_line(cfg);
  const TwistedAlgebra& T = B->total();
  const FormAlgebra& G = B->group_forms();
  std::string env;
  for (const Lin& g : G.envelope_generators()) env += (env.empty() ? "" : ", ") + G.algebra().render(g);
  b.text_target("envelope ideal in degree 2", env, "zeta*zeta");

  Connection w0 = Connection::canonical(B);
  const std::string x = T.forms().gen_name(0) == "zeta" ? T.forms().gen_name(1) : T.forms().gen_name(0);
  Params p = params_of(cfg);
  Scalar lambda = p.count(kLambda) ? p.at(kLambda) : Scalar::lambda();
  bool rel = true;
  std::string witness;
  for (auto [base, k] : std::vector<std::pair<std::string, long>>{{"z", 1}, {"z^2", 2}, {"z*", -1}})
    for (const std::string& form : {std::string("1"), x}) {
      VH phi = T.parse(base, form);
      Scalar s = form == "1" ? Scalar(1) : Scalar(-1);
      if (T.mul(w0(0), phi) != scaled(T.mul(phi, w0(0)), s * lambda.pow(k))) {
        rel = false;
        witness = T.render(phi);
      }
    }
  b.check("omega(zeta) phi = (-1)^deg lambda^k phi omega(zeta)", rel, witness);
  ConnectionFacts f0 = describe(w0);
  b.text_target("canonical connection regular", yes_no(f0.regular), "yes");
  b.connection(f0.json, f0.identities);

  Connection wa = potential_connection(B, "i*" + x);
  VH sq = T.mul(wa(0), wa(0));
  b.info("omega(zeta)^2", T.render(sq));
  ConnectionFacts fa = describe(wa);
  b.text_target("multiplicative", yes_no(fa.multiplicative), "yes");
  b.text_target("multiplicative iff omega(zeta)^2 = 0", yes_no(fa.multiplicative == sq.empty()), "yes");
  b.connection(fa.json, fa.identities);
  b.summary("omega(zeta)^2 = " + T.render(sq) + "; multiplicative: " + yes_no(fa.multiplicative));
  return b.finish();
}

Report scenario_trivial_default(const ScenarioConfig& cfg) {
  Builder b("run", "trivial-default", cfg);
  b.config("potential", cfg.potential);
  auto B = build_trivial_default(cfg);
  const TwistedAlgebra& T = B->total();
  b.config("calculus", B->gamma().name());
  Connection w0 = Connection::canonical(B);
  Connection wa = potential_connection(B, cfg.potential);
  FormMap A = {T.parse("1", cfg.potential)};
  FormMap R = curvature(wa);
  // dA - <A, A> computed on the potential alone
  FormMap F = form_add(form_d(*B, A), bracket_delta(*B, A, A), Scalar(-1));
  b.vh_target("curvature", T, R[0], F[0]);
  ConnectionFacts f = describe(wa);
  b.connection(f.json, f.identities);
  if (f.regular && regularity_sweep(w0).ok()) {
    for (const Lin& th : {Calculus::unit_form(0), Lin{{Word{0, 0}, Scalar(1)}}}) {
      std::string name = "transgression " + B->gamma().render(th);
      TransgressionResult tr = transgress(w0, wa, th);
      b.check(name + " derivative law", tr.derivative_law);
      b.vh_target(name + " residual", T, tr.residual, VH{});
      b.info(name + " integral", T.render(tr.psi_integral));
    }
  } else {
    b.info("transgression", "skipped: connection not regular");
  }
  b.axioms("bundle axioms", B->validate());
  b.summary("curvature = " + T.render(R[0]) + "; regular: " + yes_no(f.regular) + "; multiplicative: " + yes_no(f.multiplicative));
  return b.finish();
}

// ---------------------------------------------------------------------------
// Suites

std::vector<std::string> calculus_ids() { return {"3d", "4d+", "u1-from-3d", "u1-from-4d+", "u1-line", "u1-classical"}; }

void suite_axioms(Builder& b, const ScenarioConfig& cfg) {
  if (!cfg.pack.empty()) {
    b.axioms("hopf axioms " + cfg.pack, load_group(resolve_pack(cfg.pack))->validate_axioms(cfg.cap));
    return;
  }
  std::vector<std::string> groups = cfg.group.empty() ? std::vector<std::string>{"suq2", "u1"} : std::vector<std::string>{cfg.group};
  for (const auto& g : groups) b.axioms("hopf axioms " + g, builtin_group(g)->validate_axioms(cfg.cap));
}

std::vector<std::shared_ptr<Calculus>> selected_calculi(const ScenarioConfig& cfg) {
  std::vector<std::shared_ptr<Calculus>> out;
  if (!cfg.pack.empty() || !cfg.calculus.empty()) {
    out.push_back(calculus_of(cfg, cfg.calculus));
    return out;
  }
  for (const auto& id : calculus_ids()) out.push_back(builtin_calculus(id, params_of(cfg)));
  return out;
}

void suite_calculus(Builder& b, const ScenarioConfig& cfg) {
  for (const auto& c : selected_calculi(cfg)) {
    b.axioms("calculus " + c->name(), c->validate(cfg.cap));
    b.info("calculus " + c->name() + " bicovariant", yes_no(c->bicovariant()));
  }
}

void suite_graded(Builder& b, const ScenarioConfig& cfg) {
  for (const auto& c : selected_calculi(cfg)) {
    std::vector<FormAlgebra::Mode> modes = {FormAlgebra::Mode::Envelope};
    if (c->bicovariant()) modes.push_back(FormAlgebra::Mode::Exterior);
    if (!cfg.mode.empty()) modes = {FormAlgebra::parse_mode(cfg.mode)};
    for (auto m : modes) {
      FormAlgebra fa(c, m, cfg.cap);
      std::string name = "forms " + c->name() + " " + render_mode(m);
      b.axioms(name, fa.validate());
      std::string dims;
      for (int k = 0; k <= fa.cap(); ++k) dims += (k ? " " : "") + std::to_string(fa.algebra().dim(k));
      b.info(name + " dims", dims);
    }
  }
}

bool selected(const ScenarioConfig& cfg, const std::string& id) { return cfg.bundle.empty() || cfg.bundle == id; }

void suite_bundle(Builder& b, const ScenarioConfig& cfg) {
  ScenarioConfig c = cfg;
  c.mode.clear();
  if (selected(cfg, "hopf-3d")) {
    Hopf3d h = build_hopf3d(c);
    b.axioms("bundle hopf-3d reconstruction", h.hb.bundle->validate());
    auto pf = std::make_shared<FormAlgebra>(h.psi, FormAlgebra::Mode::Envelope, cfg.cap);
    b.axioms("bundle hopf-3d full", make_full_bundle(pf, h.gf, h.hb.j).validate());
  }
  if (selected(cfg, "hopf-4dplus")) b.axioms("bundle hopf-4dplus", build_4dplus(c)->validate());
  if (selected(cfg, "hopf-classical")) b.axioms("bundle hopf-classical", build_classical(c)->validate());
  if (selected(cfg, "line-bundle") || selected(cfg, "trivial-default")) {
    for (const char* calc : {"u1-line", "u1-classical"})
      for (const char* base : {"default", "heisenberg", "nilpotent"}) {
        ScenarioConfig t = c;
        t.calculus = calc;
        t.pack.clear();
        b.axioms(std::string("bundle trivial ") + calc + " over " + base, build_trivial(t, calc, base, FormAlgebra::Mode::Envelope)->validate());
      }
  }
}

void suite_connection(Builder& b, const ScenarioConfig& cfg) {
  ScenarioConfig c = cfg;
  c.mode.clear();
  std::vector<Connection> conns;
  if (selected(cfg, "hopf-3d")) conns.push_back(Connection::canonical(build_hopf3d(c).hb.bundle));
  if (selected(cfg, "hopf-4dplus")) conns.push_back(connection_4dplus(build_4dplus(c), Scalar::t()));
  if (selected(cfg, "hopf-classical")) conns.push_back(Connection::canonical(build_classical(c)));
  if (selected(cfg, "line-bundle")) {
    for (const char* sq : {"zero", "nonzero"}) {
      ScenarioConfig l = c;
      l.omega_sq = sq;
      auto B = build_line(l);
      conns.push_back(Connection::canonical(B));
      conns.push_back(potential_connection(B, std::string(sq) == "zero" ? "i*e1" : "i*x"));
    }
  }
  if (selected(cfg, "trivial-default")) {
    ScenarioConfig t = c;
    t.calculus = "u1-line";
    t.pack.clear();
    auto B = build_trivial(t, "u1-line", "heisenberg", FormAlgebra::Mode::Envelope);
    conns.push_back(potential_connection(B, "i*e3+i*e1"));
  }
  for (const Connection& w : conns) {
    ConnectionFacts f = describe(w);
    std::string name = w.bundle().name() + " / " + w.name();
    for (auto it = f.json["checks"].begin(); it != f.json["checks"].end(); ++it)
      b.check(name + " " + it.key(), it.value() == "pass");
  }
}

}  // namespace

std::vector<std::string> scenario_ids() { return kScenarios; }

void check_config(const ScenarioConfig& cfg) {
  if (cfg.cap < 2) throw InvalidInput("degree cap must be at least 2");
  if (!cfg.mode.empty()) FormAlgebra::parse_mode(cfg.mode);
  if (!cfg.bundle.empty() && std::find(kScenarios.begin(), kScenarios.end(), cfg.bundle) == kScenarios.end())
    throw InvalidInput("unknown bundle '" + cfg.bundle + "'");
  if (!cfg.group.empty()) builtin_group(cfg.group);
  mu_point(cfg);
  params_of(cfg);
}

Report run_scenario(const ScenarioConfig& cfg) {
  check_config(cfg);
  if (cfg.scenario == "hopf-3d") return scenario_hopf3d(cfg);
  if (cfg.scenario == "hopf-4dplus") return scenario_4dplus(cfg);
  if (cfg.scenario == "hopf-classical") return scenario_classical(cfg);
  if (cfg.scenario == "line-bundle") return scenario_line(cfg);
  if (cfg.scenario == "trivial-default") return scenario_trivial_default(cfg);
  throw InvalidInput("unknown scenario '" + cfg.scenario + "'");
}

Report run_suite(const std::string& suite, const ScenarioConfig& cfg) {
  check_config(cfg);
  static const std::vector<std::string> kSuites = {"axioms", "calculus", "graded", "bundle", "connection"};
  if (suite != "all" && std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end())
    throw InvalidInput("unknown suite '" + suite + "'");
  Builder b("verify", suite, cfg);
  for (const auto& s : kSuites) {
    if (suite != "all" && suite != s) continue;
    if (s == "axioms") suite_axioms(b, cfg);
    if (s == "calculus") suite_calculus(b, cfg);
    if (s == "graded") suite_graded(b, cfg);
    if (s == "bundle") suite_bundle(b, cfg);
    if (s == "connection") suite_connection(b, cfg);
  }
  Report r = b.finish();
  int tested = 0, failed = 0;
  for (const auto& c : r.body["checks"]) {
    tested += c.contains("tested") ? c["tested"].get<int>() : 1;
    failed += c.contains("failed") ? c["failed"].get<int>() : (c["result"] == "fail" ? 1 : 0);
  }
  r.body["totals"] = {{"tested", tested}, {"failed", failed}};
  return r;
}

Report export_data(const std::string& kind, const ScenarioConfig& cfg) {
  check_config(cfg);
  if (kind != "relations" && kind != "omegaM" && kind != "curvature") throw InvalidInput("unknown export kind '" + kind + "'");
  if (std::find(kScenarios.begin(), kScenarios.end(), cfg.scenario) == kScenarios.end())
    throw InvalidInput("unknown scenario '" + cfg.scenario + "'");
  OJson out;
  out["export"] = kind;
  out["scenario"] = cfg.scenario;

  std::shared_ptr<const Bundle> B;
  std::shared_ptr<GradedAlgebra> Lstar;
  if (cfg.scenario == "hopf-3d") {
    Hopf3d h = build_hopf3d(cfg);
    B = h.hb.bundle;
    Lstar = h.hb.Lstar;
  } else if (cfg.scenario == "hopf-4dplus") {
    B = build_4dplus(cfg);
  } else if (cfg.scenario == "hopf-classical") {
    B = build_classical(cfg);
  } else if (cfg.scenario == "line-bundle") {
    B = build_line(cfg);
  } else {
    B = build_trivial_default(cfg);
  }
  const TwistedAlgebra& T = B->total();

  if (kind == "relations") {
    OJson rows = OJson::array();
    const GradedAlgebra& F = T.forms();
    std::set<std::string> horizontal;
    if (Lstar) {
      OJson l = OJson::array();
      for (const Lin& r : Lstar->new_relations(2)) {
        l.push_back(Lstar->render_relation(r));
        horizontal.insert(Lstar->render_relation(r));
      }
      out["horizontal"] = l;
    }
    OJson cross = OJson::array();
    for (const Lin& r : F.new_relations(2)) {
      std::string s = F.render_relation(r);
      if (!horizontal.count(s)) cross.push_back(s);
    }
    out["forms"] = cross;
  } else if (kind == "omegaM") {
    out["degree"] = cfg.degree;
    out["base_degree"] = cfg.kdeg;
    OJson basis = OJson::array();
    for (const VH& x : B->omega_M_basis(cfg.degree, cfg.kdeg)) basis.push_back(T.render(x));
    out["basis"] = basis;
  } else {
    Connection w = Connection::canonical(B);
    if (cfg.scenario == "hopf-4dplus") w = connection_4dplus(B, Scalar::parse(cfg.t));
    if (cfg.scenario == "trivial-default" || cfg.scenario == "line-bundle") w = potential_connection(B, cfg.potential);
    FormMap R = curvature(w);
    OJson c;
    for (size_t t = 0; t < R.size(); ++t) c[B->gamma().basis()[t]] = T.render(R[t]);
    out["curvature"] = c;
  }
  return {out, 0};
}

std::string render_json(const Report& r) { return r.body.dump(2) + "\n"; }

std::string render_text(const Report& r) {
  const OJson& b = r.body;
  std::ostringstream os;
  if (b.contains("export")) {
    os << b.dump(2) << "\n";
    return os.str();
  }
  os << b["command"].get<std::string>() << " " << b["subject"].get<std::string>() << " (";
  bool first = true;
  for (auto it = b["config"].begin(); it != b["config"].end(); ++it) {
    os << (first ? "" : ", ") << it.key() << " " << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump());
    first = false;
  }
  os << ")\n";
  if (!b["summary"].get<std::string>().empty()) os << b["summary"].get<std::string>() << "\n";
  for (const auto& q : b["quantities"]) {
    os << q["name"].get<std::string>() << " = " << q["value"].get<std::string>();
    if (q.contains("match")) os << (q["match"].get<bool>() ? "  [target: match]" : "  [target: MISMATCH]");
    if (q.contains("spot_check")) os << "  [mu spot check: " << q["spot_check"].get<std::string>() << "]";
    os << "\n";
    if (q.contains("match") && !q["match"].get<bool>()) {
      os << "  expected: " << q["target"].get<std::string>() << "\n";
      os << "  got:      " << q["value"].get<std::string>() << "\n";
      if (q.contains("diff")) os << "  diff:     " << q["diff"].get<std::string>() << "\n";
    }
  }
  for (const auto& c : b["checks"]) {
    os << "check " << c["name"].get<std::string>() << ": " << c["result"].get<std::string>();
    if (c.contains("tested")) os << " (" << c["tested"].get<int>() << " tested, " << c["failed"].get<size_t>() << " failed)";
    os << "\n";
    if (c.contains("detail")) os << "  witness: " << c["detail"].get<std::string>() << "\n";
    if (c.contains("failures"))
      for (const auto& f : c["failures"])
        os << "  " << f["axiom"].get<std::string>() << " @ " << f["witness"].get<std::string>() << "\n";
  }
  for (const auto& c : b["connections"]) {
    os << "connection " << c["connection"].get<std::string>() << ": curvature " << c["curvature"].get<std::string>()
       << "; regular " << c["regular"].get<std::string>() << "; multiplicative " << c["multiplicative"].get<std::string>() << "\n";
    os << "  tested " << c["tested_set"].size() << ", defects " << c["defects"].size() << "\n";
    for (const auto& d : c["defects"])
      os << "  defect " << d["kind"].get<std::string>() << " @ " << d["witness"].get<std::string>() << ": " << d["value"].get<std::string>()
         << "\n";
    for (auto it = c["checks"].begin(); it != c["checks"].end(); ++it)
      os << "  check " << it.key() << ": " << it.value().get<std::string>() << "\n";
  }
  if (b.contains("totals")) os << "totals: " << b["totals"]["tested"] << " tested, " << b["totals"]["failed"] << " failed\n";
  os << "result: " << b["status"].get<std::string>() << "\n";
  return os.str();
}

}  // namespace qpb
