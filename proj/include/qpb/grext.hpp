#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qpb/focalc.hpp"
#include "qpb/linear.hpp"

namespace qpb {

/// Reduced row echelon span of word combinations.  The pivot of a row is its
/// smallest word; every row has pivot coefficient one and no other row's pivot
/// in its support, so reduction is a single pass and representatives are
/// canonical.
class RowSpace {
 public:
  /// Returns true if `v` enlarged the span.
  bool insert(const Lin& v);
  Lin reduce(const Lin& v) const;
  bool contains(const Lin& v) const { return reduce(v).empty(); }
  bool is_pivot(const Word& w) const { return rows_.count(w) != 0; }
  size_t dim() const { return rows_.size(); }
  const std::map<Word, Lin>& rows() const { return rows_; }

 private:
  std::map<Word, Lin> rows_;
};

/// Basis of the linear relations among `vecs`: each result lists coefficients
/// c_i (by index) with sum_i c_i vecs[i] = 0.
template <class K>
std::vector<Comb<int>> linear_dependencies(const std::vector<Comb<K>>& vecs);

/// One-line permutation p of {0..n-1}; s_i o p swaps the values i and i+1.
using Perm = std::vector<int>;
std::vector<Perm> all_perms(int n);
int perm_length(const Perm& p);
/// Reduced word (i1..im) with p = s_i1 o ... o s_im, taking the smallest left descent first.
std::vector<int> reduced_word(const Perm& p);
/// Every reduced word of p.
std::vector<std::vector<int>> all_reduced_words(const Perm& p);
/// Minimal representatives of the cosets (S_k x S_l) o rho in S_{k+l}.
std::vector<Perm> shuffles(int k, int l);

/// Graded algebra on degree-one generators modulo a homogeneous two-sided
/// ideal, materialized degree by degree up to `cap`.  The degree-k ideal is
/// spanned by the degree-k relations, V I_{k-1}, I_{k-1} V, and whatever the
/// optional `extra` callback adds given that closure.
class GradedAlgebra {
 public:
  using Extra = std::function<std::vector<Lin>(int degree, const RowSpace& closure, const std::vector<Word>& normal)>;

  GradedAlgebra(std::vector<std::string> gens, int cap, std::vector<Lin> relations, Extra extra = {});

  int ngens() const { return static_cast<int>(gens_.size()); }
  int cap() const { return cap_; }
  const std::vector<std::string>& gens() const { return gens_; }
  const std::string& gen_name(int g) const { return gens_[g]; }
  int gen_index(const std::string& name) const;

  const RowSpace& ideal(int k) const { return ideal_.at(k); }
  /// Words of length k that are not pivots: a basis of the degree-k quotient.
  const std::vector<Word>& normal_words(int k) const { return normal_.at(k); }
  int dim(int k) const { return static_cast<int>(normal_.at(k).size()); }
  /// Ideal rows of degree k that do not follow from lower degrees.
  std::vector<Lin> new_relations(int k) const;

  /// Canonical representative; throws CapExceeded for words longer than cap.
  Lin reduce(const Lin& x) const;
  Lin mul(const Lin& a, const Lin& b) const;
  bool in_ideal(const Lin& x) const { return reduce(x).empty(); }

  std::string render_word(const Word& w) const;
  std::string render(const Lin& x) const;
  /// Renders an ideal row as "lead = -(rest)" style relation text.
  std::string render_relation(const Lin& row) const;
  Lin parse(const std::string& text) const;

 private:
  std::vector<std::string> gens_;
  int cap_;
  std::vector<RowSpace> ideal_;
  std::vector<RowSpace> closure_;
  std::vector<std::vector<Word>> normal_;
};

/// All words of length k over n letters in lexicographic order.
std::vector<Word> all_words(int n, int k);

/// Higher-order invariant forms of a calculus: the universal envelope
/// (ideal generated by pi(a(1)) (x) pi(a(2)), a in the ideal) or the braided
/// exterior algebra (ideal = ker of the antisymmetrizers), with d, delta,
/// the right action, the coaction and the star.
class FormAlgebra {
 public:
  enum class Mode { Envelope, Exterior };

  FormAlgebra(std::shared_ptr<const Calculus> calc, Mode mode, int cap);
  static Mode parse_mode(const std::string& s);

  const Calculus& calculus() const { return *calc_; }
  std::shared_ptr<const Calculus> calculus_ptr() const { return calc_; }
  const GradedAlgebra& algebra() const { return *alg_; }
  Mode mode() const { return mode_; }
  int cap() const { return alg_->cap(); }

  /// pi(a(1)) (x) pi(a(2)) for a group element.
  Lin germ2(const Lin& a) const;
  /// Degree-2 generators of the envelope ideal, closed under the right action.
  const std::vector<Lin>& envelope_generators() const { return env_gens_; }

  Lin reduce(const Lin& x) const { return alg_->reduce(x); }
  Lin mul(const Lin& a, const Lin& b) const { return alg_->mul(a, b); }
  /// d on canonical representatives: d(e_i) = [delta(e_i)], graded Leibniz.
  Lin d(const Lin& x) const;
  /// d on free tensor words before reduction.
  Lin d_free(const Lin& x) const;
  Lin star(const Lin& x) const { return reduce(calc_->star(x)); }
  Lin circ(const Lin& x, const Lin& a) const { return reduce(calc_->circ(x, a)); }
  Coact varpi(const Lin& x) const;

  /// sigma_p for a permutation given by a reduced word, on free tensor words.
  Lin sigma_word(const std::vector<int>& word, const Lin& x, int offset = 0) const;
  /// A_n by the sum over all permutations, each through its fixed reduced word.
  Lin antisym_brute(const Lin& x) const;
  /// A_n = (A_{n-1} (x) id) A_{n-1,1}, memoized per word.
  Lin antisym(const Lin& x) const;
  /// A_{kl}: signed sum over shuffles.
  Lin antisym_shuffle(int k, int l, const Lin& x) const;
  /// (A_k (x) A_l) on words of length k+l.
  Lin antisym_pair(int k, int l, const Lin& x) const;

  /// d^2 = 0, d descends, ideal stable under o and star, delta laws,
  /// degree-2 envelope generators fixed by sigma, exterior factorization.
  AxiomReport validate() const;

  std::string render(const Lin& x) const { return alg_->render(x); }

 private:
  std::shared_ptr<const Calculus> calc_;
  Mode mode_;
  std::vector<Lin> env_gens_;
  std::unique_ptr<GradedAlgebra> alg_;
  std::vector<Lin> d_gen_;
  mutable std::map<Word, Lin> antisym_cache_;
  mutable std::map<Word, Lin> d_cache_;

  Lin antisym_word(const Word& w) const;
};

std::string render_mode(FormAlgebra::Mode m);

}  // namespace qpb

#include "qpb/grext_impl.hpp"
