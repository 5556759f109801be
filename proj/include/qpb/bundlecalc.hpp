#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qpb/focalc.hpp"
#include "qpb/grext.hpp"

namespace qpb {

/// Element of a twisted algebra K x Y: keys pair a normal word of the
/// degree-zero algebra K with a normal word of the invariant forms Y.
using VH = Comb<std::pair<Word, Word>>;
/// Element of Omega(P) (x) (A x Gamma^): keys (K word, Y word, A word, Gamma word).
using VH2 = Comb<std::array<Word, 4>>;

/// Pairs a function word with an invariant-form word.
inline VH vh_term(const Word& k, const Word& y, const Scalar& c = Scalar(1)) {
  VH out;
  add_term(out, std::make_pair(k, y), c);
  return out;
}
VH vh_from_base(const Lin& b);
VH vh_from_forms(const Lin& y);
/// Degree of the form leg of the first term; -1 for zero.
int vh_degree(const VH& x);

/// Graded *-algebra K x Y generated by a Hopf *-algebra K in degree zero and
/// a graded algebra Y of invariant forms, with
///   (q (x) x)(b (x) y) = q b(1) (x) (x o b(2)) y,
///   d(b (x) y) = b(1) (x) theta(b(2)) y + b (x) dy,
///   (b (x) x)* = (1 (x) x*)(b* (x) 1).
/// theta on words follows the germs recursion theta(g w) = theta(g) o w + eps(g) theta(w).
class TwistedAlgebra {
 public:
  struct Tables {
    std::string name;
    std::shared_ptr<const Presentation> base;
    std::shared_ptr<const GradedAlgebra> forms;
    std::vector<std::vector<Lin>> circ;  // circ[y][g] = y o g, degree one
    std::vector<Lin> theta;              // per base generator, degree one
    std::vector<Lin> dform;              // per form generator, degree two
    std::vector<Lin> star;               // per form generator
  };

  explicit TwistedAlgebra(Tables t);

  const std::string& name() const { return t_.name; }
  const Presentation& base() const { return *t_.base; }
  const GradedAlgebra& forms() const { return *t_.forms; }
  int cap() const { return t_.forms->cap(); }

  VH reduce(const VH& x) const;
  VH mul(const VH& a, const VH& b) const;
  VH d(const VH& x) const;
  VH star(const VH& x) const;

  /// Right action of a base word on a form word, legwise through the coproduct.
  const Lin& circ(const Word& y, const Word& k) const;
  const Lin& theta(const Word& k) const;
  /// d on invariant forms (graded Leibniz on generators, then reduction).
  Lin dform(const Lin& y) const;
  Lin star_form(const Lin& y) const;

  /// Associativity, graded Leibniz, d^2 = 0, involutivity and
  /// antimultiplicativity of the star and d(x*) = d(x)* on all products of
  /// at most two generators (base generators and form generators).
  AxiomReport validate() const;

  std::string render(const VH& x) const;
  VH parse(const std::string& base_text, const std::string& form_text) const;

 private:
  Tables t_;
  mutable std::map<std::pair<Word, Word>, Lin> circ_cache_;
  mutable std::map<std::pair<int, Word>, Lin> circ_gen_cache_;
  mutable std::map<Word, Lin> theta_cache_;
  mutable std::map<Word, Lin> dform_cache_;

  const Lin& circ_gen(int y, const Word& k) const;
};

/// Samples used by property checks: unit, generators and pairwise products.
std::vector<VH> twisted_samples(const TwistedAlgebra& A, bool with_products);

/// Graded-differential *-algebra on the base of a trivial bundle.
struct BaseDGA {
  std::string name;
  std::shared_ptr<const GradedAlgebra> algebra;
  std::vector<Lin> d;     // per generator
  std::vector<Lin> star;  // per generator
  std::vector<Lin> relations;

  Lin dform(const Lin& x) const;
  Lin star_form(const Lin& x) const;
  /// d^2 = 0, d and star compatible with the relations, star involutive.
  AxiomReport validate() const;
};

BaseDGA load_base(const Json& pack, int cap);

/// Horizontal data of the constructive approach: a degree-zero algebra K
/// with a morphism j onto the structure group, an algebra L of horizontal
/// invariant forms with its right K-action, coaction, D and the curvature R
/// on the invariant forms of the group.
struct HorData {
  std::string name;
  std::shared_ptr<const Presentation> total;
  HopfMorphism j;                     // K -> A
  std::vector<std::string> gens;      // horizontal generators
  std::vector<Lin> relations;         // among horizontal generators
  std::vector<std::vector<Lin>> circ; // circ[l][g], degree one in horizontal generators
  std::vector<Lin> kappa;             // per K generator: horizontal part of its germ
  std::vector<Lin> D;                 // per horizontal generator, degree two
  std::vector<Lin> R;                 // per Gamma basis element, degree two
  std::vector<Lin> star;              // per horizontal generator
  std::vector<Coact> chi;             // per horizontal generator: sum l_k (x) c_k
};

/// A quantum principal bundle with its total calculus Omega(P) realized as a
/// twisted algebra, the structure group calculus and the coaction F^.
class Bundle {
 public:
  struct Parts {
    std::string name;
    std::shared_ptr<const TwistedAlgebra> total;
    std::shared_ptr<const FormAlgebra> group_forms;
    HopfMorphism j;                    // K -> A; F = (id (x) j) phi
    std::vector<VH2> fhat_forms;       // F^ on each form generator
    std::vector<int> vertical;         // Gamma basis index -> form generator (empty if not split)
  };

  explicit Bundle(Parts p);

  const std::string& name() const { return p_.name; }
  const TwistedAlgebra& total() const { return *p_.total; }
  std::shared_ptr<const TwistedAlgebra> total_ptr() const { return p_.total; }
  const FormAlgebra& group_forms() const { return *p_.group_forms; }
  const Calculus& gamma() const { return p_.group_forms->calculus(); }
  const Presentation& group() const { return gamma().group(); }
  const TwistedAlgebra& group_total() const { return *group_total_; }
  const HopfMorphism& j() const { return p_.j; }
  /// True when the form generators split into vertical ones (one per Gamma
  /// basis element) and horizontal ones, with normal words (horizontal)(vertical).
  bool split() const { return !p_.vertical.empty(); }
  const std::vector<int>& vertical() const { return p_.vertical; }
  bool is_vertical_gen(int y) const;

  /// F(b) = b(1) (x) j(b(2)).
  Coact F(const Lin& b) const;
  VH2 fhat(const VH& x) const;
  VH2 mul2(const VH2& a, const VH2& b) const;
  VH2 star2(const VH2& a) const;
  /// (d (x) id + (-1)^deg id (x) d) on the graded tensor product.
  VH2 d2(const VH2& a) const;
  static VH2 tensor_one(const VH& x);

  bool is_horizontal(const VH& x) const;
  /// F^(phi) restricted to the Gamma-degree-zero part: pairs (phi_k, c_k).
  std::vector<std::pair<VH, Lin>> fwedge(const VH& phi) const;
  /// Projection onto the part with no horizontal form letters (split bundles).
  VH pi_v(const VH& x) const;
  /// Words whose form letters are all vertical, as a VH in the split normal form.
  VH vertical_form(const Lin& gamma_form) const;

  /// Basis of the degree-k invariants {w : F^(w) = w (x) 1} among
  /// horizontal elements built from base words of degree <= kdeg.
  std::vector<VH> omega_M_basis(int degree, int kdeg) const;
  /// Basis of the elements w of degree k, base words <= kdeg, with F^(w) in Omega(P) (x) A.
  std::vector<VH> horizontal_basis(int degree, int kdeg) const;

  /// qpb1/qpb2 on generators, the twisted-algebra laws, F^ multiplicative,
  /// star-preserving and intertwining d on generator pairs.
  AxiomReport validate() const;

  std::string render(const VH& x) const { return total().render(x); }
  std::string render(const VH2& x) const;

 private:
  Parts p_;
  std::shared_ptr<TwistedAlgebra> group_total_;
  mutable std::map<Word, VH2> fhat_base_cache_;
  mutable std::map<Word, VH2> fhat_form_cache_;
};

/// Omega(P) = K x (L^ (x) Gamma^) with vertical generators first.  Throws
/// InvalidInput when the twisted tensor product does not have the expected
/// dimensions or the data violates the reconstruction conditions.
Bundle omega_build(const HorData& hor, std::shared_ptr<const FormAlgebra> gamma_forms);
/// The interior algebra (L^ (x) Gamma^ with cross relations) used by omega_build.
std::shared_ptr<GradedAlgebra> frak_l_algebra(const HorData& hor, const FormAlgebra& gamma_forms);

/// Trivial bundle over a base DGA: Omega(P) = Omega(M) (x)^ Gamma^, F = phi.
Bundle make_trivial_bundle(const BaseDGA& base, std::shared_ptr<const FormAlgebra> gamma_forms);
HorData trivial_hor_data(const BaseDGA& base, std::shared_ptr<const Presentation> group);
/// Horizontal data with no horizontal forms, D = 0 and R = 0.
HorData degenerate_hor_data(std::shared_ptr<const Presentation> total, const HopfMorphism& j, int ngamma);

/// Full calculus of the total space of a homogeneous bundle (Psi^ over H)
/// with F^(y) = chi(y) + 1 (x) rho(y).  Not split.
Bundle make_full_bundle(std::shared_ptr<const FormAlgebra> psi_forms, std::shared_ptr<const FormAlgebra> gamma_forms,
                        const HopfMorphism& j);

/// Quantum homogeneous bundle H -> H/G with a splitting Psi_inv = L (+) L^perp.
struct HomogeneousBundle {
  std::shared_ptr<const Calculus> psi;
  std::shared_ptr<const FormAlgebra> gamma_forms;
  HopfMorphism j;
  std::vector<Lin> rho;         // per Psi basis element
  std::vector<Lin> L;           // basis of ker rho, as Psi forms
  std::vector<Lin> Lperp;       // complement basis
  std::vector<Lin> lift;        // per Gamma basis element: (rho on L^perp)^-1
  std::vector<Coact> chi;       // per Psi basis element: (pi' (x) j) ad'
  std::vector<Lin> K1;          // degree-two relations among L generators
  std::vector<Lin> K2;          // degree-three relations
  std::shared_ptr<GradedAlgebra> Lstar;
  HorData hor;
  std::shared_ptr<Bundle> bundle;

  /// Projection of a Psi form onto L in L-generator coordinates.
  Lin kappa_perp(const Lin& psi_form) const;
  /// kappa(b) = rho_perp pi'(b).
  Lin kappa(const Lin& b) const;
  /// Translation pairs (q_k, b_k) with sum q_k F(b_k) = 1 (x) a.
  std::vector<std::pair<Lin, Lin>> translation(const Lin& a) const;
};

HomogeneousBundle make_homogeneous_bundle(std::shared_ptr<const Calculus> psi, std::shared_ptr<const FormAlgebra> gamma_forms,
                                          const HopfMorphism& j, std::vector<Lin> lperp, int cap);

/// The morphism suq2 -> u1 (alpha -> z, gamma -> 0).
HopfMorphism hopf_fibration_map(const Presentation& suq2, const Presentation& u1);

/// D on horizontal elements of a split bundle with canonical connection:
/// the horizontal part of d.
VH horizontal_d(const Bundle& B, const VH& phi);
/// R pi(a) = -sum q_k D^2(b_k) from the translation pairs.
VH curvature_from_D(const Bundle& B, const std::vector<std::pair<Lin, Lin>>& pairs);

/// ver(P) = B (x) Gamma^ with the product, star and d_v written directly in
/// terms of F (keys: base word, Gamma word).
class VerAlgebra {
 public:
  VerAlgebra(std::shared_ptr<const Presentation> total, HopfMorphism j, std::shared_ptr<const FormAlgebra> gamma_forms);

  VH mul(const VH& a, const VH& b) const;
  VH star(const VH& a) const;
  /// d_v(b (x) t) = b (x) dt + sum b_k (x) pi(c_k) t.
  VH d(const VH& a) const;
  /// The variant with the whole b in place of b_k in the sum; agrees with d
  /// only on elements homogeneous for the coaction.
  VH d_printed(const VH& a) const;

 private:
  std::shared_ptr<const Presentation> total_;
  HopfMorphism j_;
  std::shared_ptr<const FormAlgebra> gf_;
  Coact F(const Word& b) const;
};

}  // namespace qpb
