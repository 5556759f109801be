#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qpb/hopf.hpp"
#include "qpb/packs.hpp"

namespace qpb {

/// Element of (forms) (x) A: keys pair a form word with a normal group word.
using Coact = Comb<std::pair<Word, Word>>;

/// Left-covariant first-order *-calculus given by finite tables on the
/// invariant 1-forms.  Forms of any tensor degree are `Lin` over words of
/// basis indices; a degree-1 form has words of length one.
class Calculus {
 public:
  struct Tables {
    std::string name;
    std::vector<std::string> basis;
    std::vector<Lin> pi;                      // per group generator, a degree-1 form
    std::vector<std::vector<Lin>> circ;       // circ[i][g] = e_i o g
    std::vector<Lin> preimages;               // per basis element, group element in ker(eps)
    std::vector<Lin> ideal;                   // right-ideal generators, normalized
    std::vector<std::string> ideal_text;
    std::string mode = "envelope";
  };

  Calculus(std::shared_ptr<Presentation> group, Tables t);

  const Presentation& group() const { return *group_; }
  std::shared_ptr<Presentation> group_ptr() const { return group_; }
  const std::string& name() const { return t_.name; }
  int dim() const { return static_cast<int>(t_.basis.size()); }
  const std::vector<std::string>& basis() const { return t_.basis; }
  int basis_index(const std::string& name) const;
  const std::vector<Lin>& ideal() const { return t_.ideal; }
  const std::vector<std::string>& ideal_text() const { return t_.ideal_text; }
  const std::string& mode() const { return t_.mode; }
  const Lin& preimage(int i) const;
  /// True when (pi (x) id)ad kills every ideal generator, i.e. the calculus is
  /// also right-covariant and the adjoint coaction is defined.
  bool bicovariant() const { return bicovariant_; }
  /// (pi (x) id)ad(r) for a group element; zero on the ideal iff bicovariant.
  Coact ad_defect(const Lin& r) const;

  static Lin unit_form(int i) { return Lin{{Word{i}, Scalar(1)}}; }

  /// Germs map via pi(g w) = pi(g) o w + eps(g) pi(w); accepts unreduced words.
  Lin pi(const Word& a) const;
  Lin pi(const Lin& a) const;
  /// e_i o a for a (possibly unreduced) group word.
  const Lin& circ1(int i, const Word& a) const;
  /// Right action on a tensor word: (x y) o a = (x o a(1)) (y o a(2)).
  Lin circ(const Word& x, const Word& a) const;
  Lin circ(const Lin& x, const Lin& a) const;

  /// varpi(e_i) = sum_j e_j (x) W[i][j], computed as (pi (x) id) ad(preimage).
  /// Throws SpecIncomplete for calculi that are not bicovariant.
  const std::vector<Lin>& varpi_row(int i) const;
  /// Coaction on tensor words, legwise with products in A.
  Coact varpi(const Word& x) const;
  Coact varpi(const Lin& x) const;
  /// sigma(e_a (x) e_b) = sum_k e_k (x) (e_a o c_k) where varpi(e_b) = e_k (x) c_k.
  const Lin& sigma(int a, int b) const;
  /// Applies sigma at positions (pos, pos+1) of tensor words.
  Lin sigma_at(const Lin& x, int pos) const;
  /// c^T = (id (x) pi) varpi.
  Lin ctop(int i) const;
  /// delta(e_i) = -pi(a(1)) (x) pi(a(2)) for the stored preimage a.
  Lin delta(int i) const;
  /// Antilinear star on tensor forms: (x y)* = (-1)^{|x||y|} y* x*, e_i* = -pi(kappa(a_i)*).
  Lin star(const Lin& x) const;
  const Lin& star_row(int i) const { return star_[i]; }

  /// Module law, relation compatibility, germs recursion, ideal annihilation,
  /// bicovariance, star laws, coaction laws and the braid equation.
  AxiomReport validate(int cap) const;

  std::string render(const Lin& form) const;
  std::string render_word(const Word& w) const;
  std::string render(const Coact& x) const;

 private:
  std::shared_ptr<Presentation> group_;
  Tables t_;
  bool bicovariant_ = false;
  std::vector<std::vector<Lin>> W_;
  std::vector<Lin> star_;
  mutable std::map<Word, Lin> pi_cache_;
  mutable std::map<std::pair<int, Word>, Lin> circ_cache_;
  mutable std::map<std::pair<Word, int>, Lin> circ_word_cache_;
  mutable std::map<std::pair<int, int>, Lin> sigma_cache_;

  Lin circ_gen(const Word& x, int g) const;
};

/// Builds a calculus from a `calculus` pack section; `params` substitutes
/// formal parameters (e.g. lambda) in every coefficient.
std::shared_ptr<Calculus> load_calculus(const Json& pack, std::shared_ptr<Presentation> group,
                                        const Params& params = {});
/// Built-in calculus together with its built-in group.
std::shared_ptr<Calculus> builtin_calculus(const std::string& id, const Params& params = {});

/// Linear form maps expressed by matrices on tensor words.
Lin tensor_words(const Lin& a, const Lin& b);

}  // namespace qpb
