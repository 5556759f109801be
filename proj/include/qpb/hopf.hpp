#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qpb/linear.hpp"
#include "qpb/scalar.hpp"

namespace qpb {

class Presentation;

/// Element of a tensor power A^{⊗n}, keyed by tuples of normal words.
struct Sweedler {
  int legs = 2;
  Comb<std::vector<Word>> terms;

  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const Sweedler& a, const Sweedler& b) { return a.legs == b.legs && a.terms == b.terms; }
};

/// Normal-form element of a presented algebra.
class HopfElement {
 public:
  HopfElement() = default;
  HopfElement(const Presentation* p, Lin terms) : p_(p), t_(std::move(terms)) {}

  const Presentation* pres() const { return p_; }
  const Lin& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::string str() const;

  friend HopfElement operator+(const HopfElement& a, const HopfElement& b);
  friend HopfElement operator-(const HopfElement& a, const HopfElement& b);
  friend HopfElement operator*(const HopfElement& a, const HopfElement& b);
  friend HopfElement operator*(const Scalar& c, const HopfElement& a);
  HopfElement operator-() const { return Scalar(-1) * *this; }
  friend bool operator==(const HopfElement& a, const HopfElement& b);

 private:
  const Presentation* p_ = nullptr;
  Lin t_;
};

/// Oriented relation lhs -> rhs.
struct Rule {
  Word lhs;
  Lin rhs;
};

struct AxiomFailure {
  std::string axiom;
  std::string witness;
  std::string detail;
};

struct AxiomReport {
  int checks = 0;
  std::vector<AxiomFailure> failures;
  std::vector<std::string> notes;  // structural findings that are not failures
  bool ok() const { return failures.empty(); }
  void check(bool pass, const std::string& axiom, const std::string& witness, const std::string& detail = "") {
    ++checks;
    if (!pass) failures.push_back({axiom, witness, detail});
  }
};

/// Presented Hopf *-algebra: generators, a terminating rewrite system whose
/// irreducible words form a linear basis, and structure maps on generators
/// extended (anti)multiplicatively.  Normal forms and coproducts are
/// memoized, so a presentation should be used from one thread at a time.
class Presentation {
 public:
  Presentation(std::string name, std::vector<std::string> gens, std::vector<int> star, std::vector<Rule> rules);

  const std::string& name() const { return name_; }
  int ngens() const { return static_cast<int>(gens_.size()); }
  const std::string& gen_name(int g) const { return gens_[g]; }
  int gen_index(const std::string& name) const;
  int star_of(int g) const { return star_[g]; }
  const std::vector<Rule>& rules() const { return rules_; }

  void set_coproduct(int g, Sweedler s);
  void set_counit(int g, Scalar c);
  void set_antipode(int g, Lin a);
  /// Derives coproduct, counit and antipode from unitary corepresentation
  /// matrices: phi(u_ij) = sum_k u_ik (x) u_kj, eps(u_ij) = delta_ij,
  /// kappa(u_ij) = u_ji^*.  Every generator must occur as a multiple of an entry.
  void derive_from_matrices(const std::vector<std::vector<std::vector<Lin>>>& mats);

  Lin normal_form(const Word& w) const;
  Lin normalize(const Lin& x) const;
  Lin mul(const Lin& a, const Lin& b) const;
  bool is_normal(const Word& w) const;
  /// Normal words of total degree <= max_degree, by degree then lexicographically.
  std::vector<Word> normal_monomials(int max_degree) const;

  Scalar counit(const Word& w) const;
  Scalar counit(const Lin& x) const;
  Lin antipode(const Word& w) const;
  Lin antipode(const Lin& x) const;
  Lin star(const Lin& x) const;
  const Sweedler& coproduct(const Word& w) const;
  /// (legs-1)-fold coproduct.
  Sweedler comultiply(const Lin& x, int legs = 2) const;
  /// Adjoint action ad(a) = a(2) (x) kappa(a(1)) a(3).
  Sweedler adjoint(const Lin& x) const;

  Sweedler tensor_mul(const Sweedler& a, const Sweedler& b) const;
  /// Applies `f` to leg `leg` of every term and re-expands.
  template <class F>
  Sweedler map_leg(const Sweedler& s, int leg, F f, int new_legs_from_leg = 1) const;

  HopfElement elem(const Lin& x) const { return HopfElement(this, normalize(x)); }
  HopfElement gen(int g) const { return elem(Lin{{Word{g}, Scalar(1)}}); }
  HopfElement one() const { return elem(Lin{{Word{}, Scalar(1)}}); }
  HopfElement parse(std::string_view text) const;
  Lin parse_lin(std::string_view text) const { return parse(text).terms(); }

  /// Critical overlaps of the rewrite rules whose two reductions disagree.
  std::vector<std::string> check_confluence() const;
  /// Hopf *-algebra axioms on all normal monomials of degree <= cap, plus
  /// compatibility of the structure maps with every relation.
  AxiomReport validate_axioms(int cap) const;

  std::string render_word(const Word& w) const;
  std::string render(const Lin& x) const;
  std::string render(const Sweedler& s) const;

 private:
  std::string name_;
  std::vector<std::string> gens_;
  std::vector<int> star_;
  std::vector<Rule> rules_;
  std::vector<std::vector<int>> rules_by_first_;
  std::vector<Sweedler> cop_;
  std::vector<Scalar> eps_;
  std::vector<Lin> kappa_;
  std::vector<bool> have_cop_, have_eps_, have_kappa_;

  mutable std::map<Word, Lin> nf_cache_;
  mutable std::map<Word, Sweedler> cop_cache_;
  mutable std::map<Word, Lin> kappa_cache_;

  void require_tables() const;
  Lin reduce_once_at(const Word& w, size_t pos, int rule) const;
};

template <class F>
Sweedler Presentation::map_leg(const Sweedler& s, int leg, F f, int new_legs_from_leg) const {
  Sweedler out;
  out.legs = s.legs - 1 + new_legs_from_leg;
  for (const auto& [key, c] : s.terms) {
    Sweedler part = f(key[leg]);  // part.legs == new_legs_from_leg
    for (const auto& [pk, pc] : part.terms) {
      std::vector<Word> k;
      k.reserve(out.legs);
      k.insert(k.end(), key.begin(), key.begin() + leg);
      k.insert(k.end(), pk.begin(), pk.end());
      k.insert(k.end(), key.begin() + leg + 1, key.end());
      add_term(out.terms, k, c * pc);
    }
  }
  return out;
}

/// Single-leg Sweedler wrapper for a normal-form combination.
Sweedler as_tensor(const Lin& x);
/// Multiplies the legs of a 2-leg tensor.
Lin multiply_legs(const Presentation& p, const Sweedler& s);

/// Unital *-homomorphism between presentations given on generators.
class HopfMorphism {
 public:
  HopfMorphism() = default;
  HopfMorphism(const Presentation* src, const Presentation* dst, std::vector<Lin> images);

  const Presentation* src() const { return src_; }
  const Presentation* dst() const { return dst_; }
  Lin apply(const Word& w) const;
  Lin apply(const Lin& x) const;
  HopfElement operator()(const HopfElement& x) const;
  /// Relations map to zero and j intertwines product, coproduct, counit, antipode and star.
  AxiomReport validate(int cap) const;

 private:
  const Presentation* src_ = nullptr;
  const Presentation* dst_ = nullptr;
  std::vector<Lin> images_;
  mutable std::map<Word, Lin> cache_;
};

}  // namespace qpb
