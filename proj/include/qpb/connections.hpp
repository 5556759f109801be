#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qpb/bundlecalc.hpp"

namespace qpb {

/// Linear map on the invariant 1-forms of the structure group, one value
/// per basis element.  Connections, curvatures and tensorial forms.
using FormMap = std::vector<VH>;

/// Degree of the values (the first nonzero one); 0 when all vanish.
int form_degree(const FormMap& phi);
FormMap form_add(const FormMap& a, const FormMap& b, const Scalar& c = Scalar(1));
FormMap form_scaled(const FormMap& a, const Scalar& c);
bool form_zero(const FormMap& a);
/// Applies a scalar map to every coefficient (e.g. d/dt).
VH map_coefficients(const VH& x, const std::function<Scalar(const Scalar&)>& f);

/// Connection form omega on a bundle.  Construction checks hermicity and
/// F^ omega(t) = (omega (x) id) varpi(t) + 1 (x) t on the basis.
class Connection {
 public:
  Connection(std::shared_ptr<const Bundle> bundle, std::string name, FormMap omega);

  /// omega(t) = 1 (x) t on a split bundle.
  static Connection canonical(std::shared_ptr<const Bundle> bundle);
  /// omega(t) = (A (x) id) varpi(t) + 1 (x) t on a split bundle; A takes
  /// values in horizontal 1-forms.
  static Connection from_potential(std::shared_ptr<const Bundle> bundle, const FormMap& A);

  const Bundle& bundle() const { return *bundle_; }
  std::shared_ptr<const Bundle> bundle_ptr() const { return bundle_; }
  const std::string& name() const { return name_; }
  const FormMap& form() const { return omega_; }
  const VH& operator()(int t) const { return omega_[t]; }
  /// omega on a degree-one Gamma form.
  VH apply(const Lin& gamma_form) const;
  /// omega^(x) on a Gamma tensor word: the product of the values on its letters.
  VH apply_word(const Word& w) const;

  /// The affine family omega + t (other - omega), t the formal parameter.
  Connection toward(const Connection& other) const;

 private:
  std::shared_ptr<const Bundle> bundle_;
  std::string name_;
  FormMap omega_;
};

/// F^ phi(t) = (phi (x) id) varpi(t) on the basis.
bool is_tensorial(const Bundle& B, const FormMap& phi);
/// phi(t*) = phi(t)* on the basis.
bool is_hermitian(const Bundle& B, const FormMap& phi);

/// <phi, psi>(t) = sum phi(t^1) psi(t^2) over delta(t).
FormMap bracket_delta(const Bundle& B, const FormMap& phi, const FormMap& psi);
/// [phi, psi](t) = sum phi(t_k) psi(pi(c_k)) over c^T(t).
FormMap bracket_comm(const Bundle& B, const FormMap& phi, const FormMap& psi);

/// R = d omega - <omega, omega>.
FormMap curvature(const Connection& w);
/// d on every value.
FormMap form_d(const Bundle& B, const FormMap& phi);

/// D(phi) = d phi - (-1)^deg sum phi_k omega(pi(c_k)) for horizontal phi,
/// with F^(phi) = sum phi_k (x) c_k.
VH covariant_derivative(const Connection& w, const VH& phi);
/// D phi = d phi - (-1)^deg [phi, omega] for tensorial phi.
FormMap covariant_derivative(const Connection& w, const FormMap& phi);

/// Writes x = sum phi_V omega(V) over normal vertical words V with
/// horizontal phi_V.  Split bundles only; meaningful when omega is
/// multiplicative, so that omega(V) only depends on V in Gamma^.
std::map<Word, VH> vh_decompose(const Connection& w, const VH& x);
/// h(x): the component with empty vertical word.
VH horizontal_project(const Connection& w, const VH& x);
/// h(d x).
VH extended_derivative(const Connection& w, const VH& x);

/// l(t, phi) = omega(t) phi - (-1)^deg sum phi_k omega(t o c_k).
VH regularity_defect(const Connection& w, int t, const VH& phi);
/// r(a) = sum omega pi(a(1)) omega pi(a(2)).
VH multiplicativity_defect(const Connection& w, const Lin& a);

/// q(phi) = <omega, phi> - (-1)^deg <phi, omega> - (-1)^deg [phi, omega].
FormMap q_omega(const Connection& w, const FormMap& phi);
/// q(phi)(t) = sum l(t^1, phi(t^2)) over delta(t).
FormMap q_omega_via_defect(const Connection& w, const FormMap& phi);

struct Defect {
  std::string kind;
  std::string witness;
  std::string value;
};

struct DefectReport {
  std::vector<std::string> tested;
  std::vector<Defect> defects;
  bool ok() const { return defects.empty(); }
};

/// Generators of the horizontal forms used for regularity sweeps: base
/// generators and horizontal 1-forms with constant coefficients.
std::vector<VH> hor_generators(const Bundle& B);
DefectReport regularity_sweep(const Connection& w);
DefectReport multiplicativity_sweep(const Connection& w);

struct BianchiResult {
  FormMap left;   // D(R) by the horizontal formula minus q(R)
  FormMap right;  // <omega, <omega, omega>> - <<omega, omega>, omega>
  bool equal() const { return left == right; }
};
BianchiResult bianchi(const Connection& w);

struct WeilReport {
  VH value;
  bool invariant = false;        // varpi^(x)(t) = t (x) 1
  bool in_base = false;          // F^(value) = value (x) 1
  bool closed = false;           // d(value) = 0 (or above the cap)
  bool sigma_invariant = false;  // value unchanged under each braid sigma_i
};
/// R^(x)(t) = sum R(t_1) ... R(t_k) on a Gamma tensor element.
VH curvature_tensor_eval(const Connection& w, const Lin& t);
WeilReport weil_eval(const Connection& w, const Lin& t);

struct TransgressionResult {
  VH psi_integral;      // int_0^1 psi_t dt
  VH residual;          // R_tau(t) - R_omega(t) - d(int psi)
  bool derivative_law;  // d/dt R_t = D_t(phi) coefficientwise
};
TransgressionResult transgress(const Connection& omega, const Connection& tau, const Lin& t);

/// Infinitesimal gauge transformations: zeta maps Gamma basis elements to
/// degree-zero elements and intertwines varpi with F.
bool is_gauge(const Bundle& B, const FormMap& zeta);
VH gauge_iota(const Bundle& B, const FormMap& zeta, const VH& x);
VH gauge_lie(const Bundle& B, const FormMap& zeta, const VH& x);
/// The antiderivation on vertical words transported by omega.
VH gauge_contract_star(const Connection& w, const FormMap& zeta, const VH& x);
VH gauge_lie_star(const Connection& w, const FormMap& zeta, const VH& x);

}  // namespace qpb
