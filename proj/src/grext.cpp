#include "qpb/grext.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "qpb/errors.hpp"
#include "qpb/expr.hpp"

namespace qpb {

bool RowSpace::insert(const Lin& v) {
  Lin r = reduce(v);
  if (r.empty()) return false;
  Word pivot = r.begin()->first;
  r = scaled(r, r.begin()->second.inv());
  for (auto& [p, row] : rows_) {
    auto it = row.find(pivot);
    if (it == row.end()) continue;
    Scalar c = -it->second;
    axpy(row, r, c);
  }
  rows_.emplace(pivot, std::move(r));
  return true;
}

Lin RowSpace::reduce(const Lin& v) const {
  Lin out = v;
  auto it = out.begin();
  while (it != out.end()) {
    auto r = rows_.find(it->first);
    if (r == rows_.end()) {
      ++it;
      continue;
    }
    Word key = it->first;
    axpy(out, r->second, -it->second);
    it = out.upper_bound(key);
  }
  return out;
}

std::vector<Perm> all_perms(int n) {
  std::vector<Perm> out;
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

int perm_length(const Perm& p) {
  int inv = 0;
  for (size_t a = 0; a < p.size(); ++a)
    for (size_t b = a + 1; b < p.size(); ++b) inv += p[a] > p[b];
  return inv;
}

namespace {

std::vector<int> left_descents(const Perm& p) {
  std::vector<int> pos(p.size());
  for (size_t k = 0; k < p.size(); ++k) pos[p[k]] = static_cast<int>(k);
  std::vector<int> out;
  for (size_t i = 0; i + 1 < p.size(); ++i)
    if (pos[i + 1] < pos[i]) out.push_back(static_cast<int>(i));
  return out;
}

Perm apply_s(int i, Perm p) {
  for (int& v : p) {
    if (v == i) {
      v = i + 1;
    } else if (v == i + 1) {
      v = i;
    }
  }
  return p;
}

void reduced_words_into(const Perm& p, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  auto ds = left_descents(p);
  if (ds.empty()) {
    out.push_back(prefix);
    return;
  }
  for (int i : ds) {
    prefix.push_back(i);
    reduced_words_into(apply_s(i, p), prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<int> reduced_word(const Perm& p) {
  std::vector<int> out;
  Perm q = p;
  for (auto ds = left_descents(q); !ds.empty(); ds = left_descents(q)) {
    out.push_back(ds.front());
    q = apply_s(ds.front(), q);
  }
  return out;
}

std::vector<std::vector<int>> all_reduced_words(const Perm& p) {
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  reduced_words_into(p, prefix, out);
  return out;
}

std::vector<Perm> shuffles(int k, int l) {
  std::vector<Perm> out;
  for (const Perm& p : all_perms(k + l)) {
    auto ds = left_descents(p);
    if (std::all_of(ds.begin(), ds.end(), [k](int i) { return i == k - 1; })) out.push_back(p);
  }
  return out;
}

std::vector<Word> all_words(int n, int k) {
  std::vector<Word> out;
  Word w(k, 0);
  if (n == 0) return k == 0 ? std::vector<Word>{Word{}} : out;
  while (true) {
    out.push_back(w);
    int pos = k - 1;
    while (pos >= 0 && w[pos] == n - 1) w[pos--] = 0;
    if (pos < 0) break;
    ++w[pos];
  }
  return out;
}

GradedAlgebra::GradedAlgebra(std::vector<std::string> gens, int cap, std::vector<Lin> relations, Extra extra)
    : gens_(std::move(gens)), cap_(cap) {
  if (cap < 1) throw InvalidInput("degree cap must be at least 1");
  std::vector<std::vector<Lin>> by_degree(cap + 1);
  for (const Lin& r : relations) {
    if (r.empty()) continue;
    size_t k = r.begin()->first.size();
    for (const auto& [w, c] : r)
      if (w.size() != k) throw InvalidInput("relation is not homogeneous: " + render(r));
    if (static_cast<int>(k) <= cap) by_degree[k].push_back(r);
  }
  const int n = ngens();
  ideal_.resize(cap + 1);
  closure_.resize(cap + 1);
  normal_.resize(cap + 1);
  for (int k = 0; k <= cap; ++k) {
    RowSpace cl;
    if (k >= 1) {
      for (const auto& [p, row] : ideal_[k - 1].rows())
        for (int g = 0; g < n; ++g) {
          Lin left, right;
          for (const auto& [w, c] : row) {
            add_term(left, concat(Word{g}, w), c);
            add_term(right, concat(w, Word{g}), c);
          }
          cl.insert(left);
          cl.insert(right);
        }
    }
    closure_[k] = cl;
    for (const Lin& r : by_degree[k]) cl.insert(r);
    if (extra && k >= 1) {
      std::vector<Word> nw;
      for (const Word& w : all_words(n, k))
        if (!cl.is_pivot(w)) nw.push_back(w);
      for (const Lin& v : extra(k, cl, nw)) cl.insert(v);
    }
    ideal_[k] = cl;
    for (const Word& w : all_words(n, k))
      if (!cl.is_pivot(w)) normal_[k].push_back(w);
  }
}

int GradedAlgebra::gen_index(const std::string& name) const {
  for (size_t k = 0; k < gens_.size(); ++k)
    if (gens_[k] == name) return static_cast<int>(k);
  return -1;
}

std::vector<Lin> GradedAlgebra::new_relations(int k) const {
  RowSpace fresh;
  for (const auto& [p, row] : ideal_.at(k).rows()) fresh.insert(closure_[k].reduce(row));
  std::vector<Lin> out;
  for (const auto& [p, row] : fresh.rows()) out.push_back(row);
  return out;
}

Lin GradedAlgebra::reduce(const Lin& x) const {
  Lin out = x;
  auto it = out.begin();
  while (it != out.end()) {
    int k = static_cast<int>(it->first.size());
    if (k > cap_) throw CapExceeded(k, cap_);
    const auto& rows = ideal_[k].rows();
    auto r = rows.find(it->first);
    if (r == rows.end()) {
      ++it;
      continue;
    }
    Word key = it->first;
    axpy(out, r->second, -it->second);
    it = out.upper_bound(key);
  }
  return out;
}

Lin GradedAlgebra::mul(const Lin& a, const Lin& b) const {
  Lin out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) add_term(out, concat(wa, wb), ca * cb);
  return reduce(out);
}

std::string GradedAlgebra::render_word(const Word& w) const {
  std::string s;
  for (int g : w) {
    if (!s.empty()) s += "*";
    s += gens_[g];
  }
  return s;
}

std::string GradedAlgebra::render(const Lin& x) const {
  return render_comb(x, [this](const Word& w) { return render_word(w); });
}

std::string GradedAlgebra::render_relation(const Lin& row) const {
  if (row.empty()) return "0 = 0";
  Lin rest = row;
  Word lead = rest.begin()->first;
  Scalar c = rest.begin()->second;
  rest.erase(rest.begin());
  return render(Lin{{lead, Scalar(1)}}) + " = " + render(scaled(rest, -c.inv()));
}

Lin GradedAlgebra::parse(const std::string& text) const {
  return reduce(parse_free(text, [this](const std::string& n) { return gen_index(n); }));
}

// ---------------------------------------------------------------------------

FormAlgebra::Mode FormAlgebra::parse_mode(const std::string& s) {
  if (s == "envelope") return Mode::Envelope;
  if (s == "exterior") return Mode::Exterior;
  throw InvalidInput("unknown quotient mode '" + s + "' (envelope|exterior)");
}

std::string render_mode(FormAlgebra::Mode m) { return m == FormAlgebra::Mode::Envelope ? "envelope" : "exterior"; }

Lin FormAlgebra::germ2(const Lin& a) const {
  Lin out;
  for (const auto& [k, c] : calc_->group().comultiply(a).terms)
    axpy(out, tensor_words(calc_->pi(k[0]), calc_->pi(k[1])), c);
  return out;
}

FormAlgebra::FormAlgebra(std::shared_ptr<const Calculus> calc, Mode mode, int cap) : calc_(std::move(calc)), mode_(mode) {
  if (cap < 2) throw InvalidInput("form algebras need degree cap >= 2");
  const Calculus& C = *calc_;
  const int ng = C.group().ngens();
  RowSpace span;
  std::deque<Lin> todo;
  for (const Lin& r : C.ideal())
    if (span.insert(germ2(r))) todo.push_back(germ2(r));
  while (!todo.empty()) {
    Lin v = todo.front();
    todo.pop_front();
    for (int g = 0; g < ng; ++g) {
      Lin w = C.circ(v, Lin{{Word{g}, Scalar(1)}});
      if (span.insert(w)) todo.push_back(w);
    }
  }
  for (const auto& [p, row] : span.rows()) env_gens_.push_back(row);

  if (mode == Mode::Envelope) {
    alg_ = std::make_unique<GradedAlgebra>(C.basis(), cap, env_gens_);
  } else {
    if (!C.bicovariant())
      throw InvalidInput("calculus '" + C.name() + "' is not bicovariant; the exterior quotient needs the braid");
    auto extra = [this](int k, const RowSpace&, const std::vector<Word>& normal) {
      std::vector<Lin> images;
      for (const Word& w : normal) images.push_back(k == 1 ? Lin{{w, Scalar(1)}} : antisym_word(w));
      std::vector<Lin> out;
      for (const Comb<int>& dep : linear_dependencies(images)) {
        Lin v;
        for (const auto& [i, c] : dep) add_term(v, normal[i], c);
        out.push_back(v);
      }
      return out;
    };
    alg_ = std::make_unique<GradedAlgebra>(C.basis(), cap, std::vector<Lin>{}, extra);
  }
  for (int i = 0; i < C.dim(); ++i) d_gen_.push_back(C.preimage(i).empty() ? Lin{} : C.delta(i));
}

Lin FormAlgebra::d_free(const Lin& x) const {
  Lin out;
  for (const auto& [w, c] : x) {
    for (size_t i = 0; i < w.size(); ++i) {
      Scalar sign = i % 2 ? Scalar(-c) : c;
      Word pre(w.begin(), w.begin() + i), post(w.begin() + i + 1, w.end());
      for (const auto& [dw, dc] : d_gen_[w[i]]) add_term(out, concat(concat(pre, dw), post), sign * dc);
    }
  }
  return out;
}

Lin FormAlgebra::d(const Lin& x) const {
  Lin out;
  for (const auto& [w, c] : x) {
    auto it = d_cache_.find(w);
    if (it == d_cache_.end()) it = d_cache_.emplace(w, reduce(d_free(Lin{{w, Scalar(1)}}))).first;
    axpy(out, it->second, c);
  }
  return out;
}

Coact FormAlgebra::varpi(const Lin& x) const {
  std::map<Word, Lin> by_group;
  for (const auto& [k, c] : calc_->varpi(x)) add_term(by_group[k.second], k.first, c);
  Coact out;
  for (const auto& [g, f] : by_group)
    for (const auto& [w, c] : reduce(f)) add_term(out, std::make_pair(w, g), c);
  return out;
}

Lin FormAlgebra::sigma_word(const std::vector<int>& word, const Lin& x, int offset) const {
  Lin out = x;
  for (auto it = word.rbegin(); it != word.rend(); ++it) out = calc_->sigma_at(out, *it + offset);
  return out;
}

Lin FormAlgebra::antisym_brute(const Lin& x) const {
  Lin out;
  std::map<size_t, std::vector<Perm>> perms;
  for (const auto& [w, c] : x) {
    auto& ps = perms[w.size()];
    if (ps.empty()) ps = all_perms(static_cast<int>(w.size()));
    for (const Perm& p : ps) {
      std::vector<int> rw = reduced_word(p);
      axpy(out, sigma_word(rw, Lin{{w, Scalar(1)}}), rw.size() % 2 ? Scalar(-c) : c);
    }
  }
  return out;
}

Lin FormAlgebra::antisym_shuffle(int k, int l, const Lin& x) const {
  Lin out;
  for (const Perm& p : shuffles(k, l)) {
    std::vector<int> rw = reduced_word(p);
    axpy(out, sigma_word(rw, x), rw.size() % 2 ? Scalar(-1) : Scalar(1));
  }
  return out;
}

Lin FormAlgebra::antisym_pair(int k, int l, const Lin& x) const {
  Lin out;
  for (const auto& [w, c] : x) {
    if (static_cast<int>(w.size()) != k + l) throw InvalidInput("antisymmetrizer pair: word length mismatch");
    Lin a = antisym_word(Word(w.begin(), w.begin() + k));
    Lin b = antisym_word(Word(w.begin() + k, w.end()));
    axpy(out, tensor_words(a, b), c);
  }
  return out;
}

Lin FormAlgebra::antisym_word(const Word& w) const {
  if (w.size() <= 1) return Lin{{w, Scalar(1)}};
  auto it = antisym_cache_.find(w);
  if (it != antisym_cache_.end()) return it->second;
  const int n = static_cast<int>(w.size());
  Lin sh = antisym_shuffle(n - 1, 1, Lin{{w, Scalar(1)}});
  Lin out;
  for (const auto& [v, c] : sh) {
    Lin head = antisym_word(Word(v.begin(), v.end() - 1));
    for (const auto& [hw, hc] : head) add_term(out, concat(hw, Word{v.back()}), c * hc);
  }
  return antisym_cache_[w] = out;
}

Lin FormAlgebra::antisym(const Lin& x) const {
  Lin out;
  for (const auto& [w, c] : x) axpy(out, antisym_word(w), c);
  return out;
}

AxiomReport FormAlgebra::validate() const {
  AxiomReport rep;
  const Calculus& C = *calc_;
  const GradedAlgebra& A = *alg_;
  const int cap = A.cap();
  const int ng = C.group().ngens();
  auto rw = [&A](const Word& w) { return w.empty() ? std::string("1") : A.render_word(w); };

  for (int k = 0; k + 2 <= cap; ++k)
    for (const Word& w : A.normal_words(k)) {
      Lin dd = d(d(Lin{{w, Scalar(1)}}));
      rep.check(dd.empty(), "d^2 = 0", rw(w), A.render(dd));
    }
  for (int k = 1; k <= cap; ++k)
    for (const auto& [p, row] : A.ideal(k).rows()) {
      std::string wit = A.render(row);
      if (k + 1 <= cap) {
        Lin dr = reduce(d_free(row));
        rep.check(dr.empty(), "d descends to the quotient", wit, A.render(dr));
      }
      for (int g = 0; g < ng; ++g) {
        Lin r = reduce(C.circ(row, Lin{{Word{g}, Scalar(1)}}));
        rep.check(r.empty(), "ideal stable under o", wit + " o " + C.group().gen_name(g), A.render(r));
      }
      Lin s = reduce(C.star(row));
      rep.check(s.empty(), "ideal stable under star", wit, A.render(s));
    }
  for (int i = 0; i < C.dim(); ++i) {
    if (C.preimage(i).empty()) continue;
    const Lin& del = d_gen_[i];
    Lin md = reduce(del);
    rep.check(md == d(Calculus::unit_form(i)), "m(delta) = d", C.basis()[i]);
    Lin lhs;
    for (const auto& [w, c] : C.star(Calculus::unit_form(i))) axpy(lhs, C.delta(w[0]), c);
    Lin rhs = C.star(del);
    rep.check(lhs == rhs, "delta hermitian", C.basis()[i], C.render(lhs) + " vs " + C.render(rhs));
    if (C.bicovariant()) {
      Coact l = C.varpi(del);
      Coact r;
      const auto& row = C.varpi_row(i);
      for (int j = 0; j < C.dim(); ++j)
        for (const auto& [gw, gc] : row[j])
          for (const auto& [fw, fc] : C.delta(j)) add_term(r, std::make_pair(fw, gw), gc * fc);
      rep.check(l == r, "delta equivariant", C.basis()[i]);
    }
  }
  if (C.bicovariant()) {
    for (const Lin& g : env_gens_) {
      rep.check(C.sigma_at(g, 0) == g, "envelope generator fixed by sigma", C.render(g));
      if (mode_ == Mode::Exterior) rep.check(A.in_ideal(g), "envelope generator in exterior ideal", C.render(g));
    }
  }
  return rep;
}

}  // namespace qpb
