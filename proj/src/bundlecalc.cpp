#include "qpb/bundlecalc.hpp"

#include <deque>

#include "qpb/errors.hpp"
#include "qpb/expr.hpp"

namespace qpb {

namespace {

Lin unit_word(const Word& w, const Scalar& c = Scalar(1)) { return Lin{{w, c}}; }

Scalar sign_of(long k) { return k % 2 ? Scalar(-1) : Scalar(1); }

Word shift_word(const Word& w, int by) {
  Word out = w;
  for (int& g : out) g += by;
  return out;
}

Lin shift(const Lin& x, int by) {
  Lin out;
  for (const auto& [w, c] : x) add_term(out, shift_word(w, by), c);
  return out;
}

}  // namespace

VH vh_from_base(const Lin& b) {
  VH out;
  for (const auto& [w, c] : b) add_term(out, std::make_pair(w, Word{}), c);
  return out;
}

VH vh_from_forms(const Lin& y) {
  VH out;
  for (const auto& [w, c] : y) add_term(out, std::make_pair(Word{}, w), c);
  return out;
}

int vh_degree(const VH& x) { return x.empty() ? -1 : static_cast<int>(x.begin()->first.second.size()); }

// ---------------------------------------------------------------------------
// TwistedAlgebra

TwistedAlgebra::TwistedAlgebra(Tables t) : t_(std::move(t)) {
  const int ny = forms().ngens();
  const int ng = base().ngens();
  auto bad = [this](const std::string& what) { return InvalidInput("twisted algebra '" + t_.name + "': " + what); };
  if (static_cast<int>(t_.circ.size()) != ny) throw bad("circ table size");
  for (const auto& row : t_.circ)
    if (static_cast<int>(row.size()) != ng) throw bad("circ row size");
  if (static_cast<int>(t_.theta.size()) != ng) throw bad("theta table size");
  if (static_cast<int>(t_.dform.size()) != ny) throw bad("differential table size");
  if (static_cast<int>(t_.star.size()) != ny) throw bad("star table size");
  for (auto& row : t_.circ)
    for (auto& x : row) x = forms().reduce(x);
  for (auto& x : t_.theta) x = forms().reduce(x);
  for (auto& x : t_.dform) x = forms().reduce(x);
  for (auto& x : t_.star) x = forms().reduce(x);
}

const Lin& TwistedAlgebra::circ_gen(int y, const Word& k) const {
  auto key = std::make_pair(y, k);
  auto it = circ_gen_cache_.find(key);
  if (it != circ_gen_cache_.end()) return it->second;
  Lin cur = unit_word(Word{y});
  for (int g : k) {
    Lin next;
    for (const auto& [w, c] : cur) axpy(next, t_.circ[w[0]][g], c);
    cur = std::move(next);
  }
  return circ_gen_cache_.emplace(key, cur).first->second;
}

const Lin& TwistedAlgebra::circ(const Word& y, const Word& k) const {
  auto key = std::make_pair(y, k);
  auto it = circ_cache_.find(key);
  if (it != circ_cache_.end()) return it->second;
  Lin out;
  if (y.empty()) {
    add_term(out, Word{}, base().counit(k));
  } else if (y.size() == 1) {
    out = circ_gen(y[0], k);
  } else {
    Sweedler s = base().comultiply(unit_word(k), static_cast<int>(y.size()));
    Lin free;
    for (const auto& [legs, c] : s.terms) {
      Lin acc = unit_word(Word{});
      for (size_t i = 0; i < y.size(); ++i) {
        acc = tensor_words(acc, circ_gen(y[i], legs[i]));
        if (acc.empty()) break;
      }
      axpy(free, acc, c);
    }
    out = forms().reduce(free);
  }
  return circ_cache_.emplace(key, out).first->second;
}

const Lin& TwistedAlgebra::theta(const Word& k) const {
  auto it = theta_cache_.find(k);
  if (it != theta_cache_.end()) return it->second;
  Lin out;
  if (!k.empty()) {
    Word rest(k.begin() + 1, k.end());
    for (const auto& [w, c] : t_.theta[k[0]]) axpy(out, circ_gen(w[0], rest), c);
    axpy(out, theta(rest), base().counit(Word{k[0]}));
  }
  return theta_cache_.emplace(k, out).first->second;
}

Lin TwistedAlgebra::dform(const Lin& y) const {
  Lin out;
  for (const auto& [w, c] : y) {
    auto it = dform_cache_.find(w);
    if (it == dform_cache_.end()) {
      Lin free;
      for (size_t i = 0; i < w.size(); ++i) {
        Word pre(w.begin(), w.begin() + static_cast<long>(i)), post(w.begin() + static_cast<long>(i) + 1, w.end());
        axpy(free, tensor_words(tensor_words(unit_word(pre), t_.dform[w[i]]), unit_word(post)), sign_of(static_cast<long>(i)));
      }
      it = dform_cache_.emplace(w, forms().reduce(free)).first;
    }
    axpy(out, it->second, c);
  }
  return out;
}

Lin TwistedAlgebra::star_form(const Lin& y) const {
  Lin out;
  for (const auto& [w, c] : y) {
    Lin acc = unit_word(Word{}, c.conj());
    for (auto g = w.rbegin(); g != w.rend(); ++g) acc = tensor_words(acc, t_.star[*g]);
    long k = static_cast<long>(w.size());
    axpy(out, acc, sign_of(k * (k - 1) / 2));
  }
  return forms().reduce(out);
}

VH TwistedAlgebra::reduce(const VH& x) const {
  std::map<Word, Lin> by_form;
  for (const auto& [key, c] : x) axpy(by_form[key.second], base().normal_form(key.first), c);
  std::map<Word, Lin> by_base;
  for (const auto& [y, b] : by_form)
    for (const auto& [k, c] : b) add_term(by_base[k], y, c);
  VH out;
  for (const auto& [k, y] : by_base)
    for (const auto& [w, c] : forms().reduce(y)) add_term(out, std::make_pair(k, w), c);
  return out;
}

VH TwistedAlgebra::mul(const VH& a, const VH& b) const {
  VH out;
  for (const auto& [ka, ca] : a) {
    const Word& q = ka.first;
    const Word& x = ka.second;
    for (const auto& [kb, cb] : b) {
      const Word& bw = kb.first;
      const Word& y = kb.second;
      Scalar c = ca * cb;
      if (x.empty()) {
        for (const auto& [w, cw] : base().normal_form(concat(q, bw))) add_term(out, std::make_pair(w, y), c * cw);
        continue;
      }
      for (const auto& [legs, cs] : base().coproduct(bw).terms) {
        const Lin& xc = circ(x, legs[1]);
        if (xc.empty()) continue;
        Lin form = forms().reduce(tensor_words(xc, unit_word(y)));
        if (form.empty()) continue;
        for (const auto& [w, cw] : base().normal_form(concat(q, legs[0])))
          for (const auto& [f, cf] : form) add_term(out, std::make_pair(w, f), c * cs * cw * cf);
      }
    }
  }
  return out;
}

VH TwistedAlgebra::d(const VH& x) const {
  VH out;
  for (const auto& [key, c] : x) {
    const Word& k = key.first;
    const Word& y = key.second;
    if (!k.empty()) {
      for (const auto& [legs, cs] : base().coproduct(k).terms) {
        const Lin& th = theta(legs[1]);
        if (th.empty()) continue;
        for (const auto& [f, cf] : forms().reduce(tensor_words(th, unit_word(y))))
          add_term(out, std::make_pair(legs[0], f), c * cs * cf);
      }
    }
    for (const auto& [f, cf] : dform(unit_word(y))) add_term(out, std::make_pair(k, f), c * cf);
  }
  return out;
}

VH TwistedAlgebra::star(const VH& x) const {
  VH out;
  for (const auto& [key, c] : x) {
    VH left = vh_from_forms(star_form(unit_word(key.second)));
    VH right = vh_from_base(base().star(unit_word(key.first)));
    axpy(out, mul(left, right), c.conj());
  }
  return out;
}

std::vector<VH> twisted_samples(const TwistedAlgebra& A, bool with_products) {
  std::vector<VH> gens;
  for (int g = 0; g < A.base().ngens(); ++g) gens.push_back(vh_term(Word{g}, Word{}));
  for (int y = 0; y < A.forms().ngens(); ++y) gens.push_back(vh_term(Word{}, Word{y}));
  if (!with_products) return gens;
  std::vector<VH> out = gens;
  for (const VH& a : gens)
    for (const VH& b : gens) {
      if (vh_degree(a) + vh_degree(b) > A.cap()) continue;
      VH p = A.mul(a, b);
      if (!p.empty()) out.push_back(p);
    }
  return out;
}

AxiomReport TwistedAlgebra::validate() const {
  AxiomReport rep;
  std::vector<VH> gens = twisted_samples(*this, false);
  const int cap = this->cap();
  auto deg = [](const VH& x) { return std::max(vh_degree(x), 0); };
  for (const VH& a : gens) {
    rep.check(star(star(a)) == a, "star involutive", render(a));
    if (deg(a) + 2 <= cap) rep.check(d(d(a)).empty(), "d^2 = 0", render(a));
    if (deg(a) + 1 <= cap) rep.check(d(star(a)) == star(d(a)), "d hermitian", render(a));
    for (const VH& b : gens) {
      if (deg(a) + deg(b) + 1 > cap) continue;
      std::string wit = render(a) + " | " + render(b);
      VH ab = mul(a, b);
      VH lhs = d(ab);
      VH rhs = mul(d(a), b);
      axpy(rhs, mul(a, d(b)), sign_of(deg(a)));
      rep.check(lhs == rhs, "graded Leibniz", wit);
      VH sab = star(ab);
      VH sba = scaled(mul(star(b), star(a)), sign_of(deg(a) * deg(b)));
      rep.check(sab == sba, "star antimultiplicative", wit);
      if (deg(ab) + 2 <= cap && !ab.empty()) rep.check(d(d(ab)).empty(), "d^2 = 0", wit);
      for (const VH& c : gens) {
        if (deg(a) + deg(b) + deg(c) > cap) continue;
        rep.check(mul(mul(a, b), c) == mul(a, mul(b, c)), "associativity", wit + " | " + render(c));
      }
    }
  }
  return rep;
}

std::string TwistedAlgebra::render(const VH& x) const {
  return render_comb(x, [this](const std::pair<Word, Word>& k) {
    std::string b = k.first.empty() ? "" : base().render_word(k.first);
    std::string f = k.second.empty() ? "" : forms().render_word(k.second);
    if (b.empty()) return f;
    if (f.empty()) return b;
    return b + " (x) " + f;
  });
}

VH TwistedAlgebra::parse(const std::string& base_text, const std::string& form_text) const {
  Lin b = base().parse_lin(base_text);
  Lin f = forms().parse(form_text);
  return mul(vh_from_base(b), vh_from_forms(f));
}

// ---------------------------------------------------------------------------
// BaseDGA

Lin BaseDGA::dform(const Lin& x) const {
  Lin out;
  for (const auto& [w, c] : x)
    for (size_t i = 0; i < w.size(); ++i) {
      Word pre(w.begin(), w.begin() + static_cast<long>(i)), post(w.begin() + static_cast<long>(i) + 1, w.end());
      axpy(out, tensor_words(tensor_words(unit_word(pre), d[w[i]]), unit_word(post)), c * sign_of(static_cast<long>(i)));
    }
  return algebra->reduce(out);
}

Lin BaseDGA::star_form(const Lin& x) const {
  Lin out;
  for (const auto& [w, c] : x) {
    Lin acc = unit_word(Word{}, c.conj());
    for (auto g = w.rbegin(); g != w.rend(); ++g) acc = tensor_words(acc, star[*g]);
    long k = static_cast<long>(w.size());
    axpy(out, acc, sign_of(k * (k - 1) / 2));
  }
  return algebra->reduce(out);
}

AxiomReport BaseDGA::validate() const {
  AxiomReport rep;
  const int cap = algebra->cap();
  for (int k = 0; k + 2 <= cap; ++k)
    for (const Word& w : algebra->normal_words(k))
      rep.check(dform(dform(unit_word(w))).empty(), "d^2 = 0", algebra->render_word(w));
  for (int k = 1; k <= cap; ++k)
    for (const auto& [p, row] : algebra->ideal(k).rows()) {
      if (k + 1 <= cap) rep.check(dform(row).empty(), "d respects relations", algebra->render(row));
      rep.check(star_form(row).empty(), "star respects relations", algebra->render(row));
    }
  for (int g = 0; g < algebra->ngens(); ++g) {
    Lin e = unit_word(Word{g});
    rep.check(star_form(star_form(e)) == e, "star involutive", algebra->gen_name(g));
    if (cap >= 2) rep.check(dform(star_form(e)) == star_form(dform(e)), "d hermitian", algebra->gen_name(g));
  }
  return rep;
}

BaseDGA load_base(const Json& pack, int cap) {
  if (!pack.contains("base")) throw InvalidInput("pack has no base section");
  const Json& b = pack.at("base");
  BaseDGA out;
  out.name = b.at("name").get<std::string>();
  std::vector<std::string> gens = b.at("generators").get<std::vector<std::string>>();
  auto lookup = [&gens](const std::string& n) {
    for (size_t k = 0; k < gens.size(); ++k)
      if (gens[k] == n) return static_cast<int>(k);
    return -1;
  };
  const int n = static_cast<int>(gens.size());
  if (b.value("graded_commutative", false)) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Lin r;
        add_term(r, Word{i, j}, Scalar(1));
        add_term(r, Word{j, i}, Scalar(1));
        out.relations.push_back(r);
      }
  }
  for (const Json& r : b.at("relations")) out.relations.push_back(parse_free(r.get<std::string>(), lookup));
  out.algebra = std::make_shared<GradedAlgebra>(gens, cap, out.relations);
  out.d.assign(n, Lin{});
  out.star.assign(n, Lin{});
  for (int g = 0; g < n; ++g) {
    const std::string& name = gens[g];
    if (!b.at("differential").contains(name) || !b.at("star").contains(name))
      throw InvalidInput("base '" + out.name + "' lacks d or star for " + name);
    out.d[g] = parse_free(b.at("differential").at(name).get<std::string>(), lookup);
    out.star[g] = parse_free(b.at("star").at(name).get<std::string>(), lookup);
    for (const auto& [w, c] : out.d[g])
      if (w.size() != 2) throw InvalidInput("base '" + out.name + "': d(" + name + ") must be of degree two");
  }
  AxiomReport rep = out.validate();
  if (!rep.ok())
    throw InvalidInput("invalid base '" + out.name + "': " + rep.failures.front().axiom + " at " + rep.failures.front().witness);
  return out;
}

// ---------------------------------------------------------------------------
// Bundle

Bundle::Bundle(Parts p) : p_(std::move(p)) {
  const Calculus& G = gamma();
  auto forms = std::shared_ptr<const GradedAlgebra>(p_.group_forms, &p_.group_forms->algebra());
  TwistedAlgebra::Tables t;
  t.name = G.name() + "-forms";
  t.base = G.group_ptr();
  t.forms = forms;
  const int n = G.dim();
  const int ng = G.group().ngens();
  t.circ.assign(n, std::vector<Lin>(ng));
  t.dform.resize(n);
  t.star.resize(n);
  for (int y = 0; y < n; ++y) {
    for (int g = 0; g < ng; ++g) t.circ[y][g] = G.circ1(y, Word{g});
    t.dform[y] = group_forms().d(Calculus::unit_form(y));
    t.star[y] = group_forms().star(Calculus::unit_form(y));
  }
  for (int g = 0; g < ng; ++g) t.theta.push_back(G.pi(Word{g}));
  group_total_ = std::make_shared<TwistedAlgebra>(t);
  if (static_cast<int>(p_.fhat_forms.size()) != total().forms().ngens())
    throw InvalidInput("bundle '" + p_.name + "': one coaction image per form generator is required");
}

bool Bundle::is_vertical_gen(int y) const {
  for (int v : p_.vertical)
    if (v == y) return true;
  return false;
}

Coact Bundle::F(const Lin& b) const {
  Coact out;
  for (const auto& [legs, c] : total().base().comultiply(b).terms)
    for (const auto& [a, ca] : p_.j.apply(legs[1])) add_term(out, std::make_pair(legs[0], a), c * ca);
  return out;
}

VH2 Bundle::tensor_one(const VH& x) {
  VH2 out;
  for (const auto& [k, c] : x) add_term(out, std::array<Word, 4>{k.first, k.second, Word{}, Word{}}, c);
  return out;
}

VH2 Bundle::mul2(const VH2& a, const VH2& b) const {
  VH2 out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      Scalar sign = sign_of(static_cast<long>(ka[3].size() * kb[1].size()));
      VH left = total().mul(vh_term(ka[0], ka[1]), vh_term(kb[0], kb[1]));
      if (left.empty()) continue;
      VH right = group_total().mul(vh_term(ka[2], ka[3]), vh_term(kb[2], kb[3]));
      for (const auto& [l, cl] : left)
        for (const auto& [r, cr] : right)
          add_term(out, std::array<Word, 4>{l.first, l.second, r.first, r.second}, sign * ca * cb * cl * cr);
    }
  return out;
}

VH2 Bundle::star2(const VH2& a) const {
  VH2 out;
  for (const auto& [k, c] : a) {
    Scalar sign = sign_of(static_cast<long>(k[1].size() * k[3].size()));
    VH l = total().star(vh_term(k[0], k[1]));
    VH r = group_total().star(vh_term(k[2], k[3]));
    for (const auto& [x, cx] : l)
      for (const auto& [y, cy] : r)
        add_term(out, std::array<Word, 4>{x.first, x.second, y.first, y.second}, sign * c.conj() * cx * cy);
  }
  return out;
}

VH2 Bundle::d2(const VH2& a) const {
  VH2 out;
  for (const auto& [k, c] : a) {
    for (const auto& [x, cx] : total().d(vh_term(k[0], k[1])))
      add_term(out, std::array<Word, 4>{x.first, x.second, k[2], k[3]}, c * cx);
    Scalar sign = sign_of(static_cast<long>(k[1].size()));
    for (const auto& [y, cy] : group_total().d(vh_term(k[2], k[3])))
      add_term(out, std::array<Word, 4>{k[0], k[1], y.first, y.second}, sign * c * cy);
  }
  return out;
}

VH2 Bundle::fhat(const VH& x) const {
  VH2 out;
  for (const auto& [key, c] : x) {
    auto bi = fhat_base_cache_.find(key.first);
    if (bi == fhat_base_cache_.end()) {
      VH2 fb;
      for (const auto& [k, cf] : F(unit_word(key.first)))
        add_term(fb, std::array<Word, 4>{k.first, Word{}, k.second, Word{}}, cf);
      bi = fhat_base_cache_.emplace(key.first, fb).first;
    }
    auto fi = fhat_form_cache_.find(key.second);
    if (fi == fhat_form_cache_.end()) {
      VH2 acc;
      add_term(acc, std::array<Word, 4>{}, Scalar(1));
      for (int y : key.second) acc = mul2(acc, p_.fhat_forms[y]);
      fi = fhat_form_cache_.emplace(key.second, acc).first;
    }
    axpy(out, mul2(bi->second, fi->second), c);
  }
  return out;
}

bool Bundle::is_horizontal(const VH& x) const {
  for (const auto& [k, c] : fhat(x))
    if (!k[3].empty()) return false;
  return true;
}

std::vector<std::pair<VH, Lin>> Bundle::fwedge(const VH& phi) const {
  std::map<Word, VH> by_a;
  for (const auto& [k, c] : fhat(phi))
    if (k[3].empty()) add_term(by_a[k[2]], std::make_pair(k[0], k[1]), c);
  std::vector<std::pair<VH, Lin>> out;
  for (const auto& [a, v] : by_a) out.emplace_back(v, unit_word(a));
  return out;
}

VH Bundle::pi_v(const VH& x) const {
  if (!split()) throw InvalidInput("bundle '" + p_.name + "' has no vertical/horizontal split");
  VH out;
  for (const auto& [k, c] : x) {
    bool vertical_only = true;
    for (int y : k.second) vertical_only = vertical_only && is_vertical_gen(y);
    if (vertical_only) add_term(out, k, c);
  }
  return out;
}

VH Bundle::vertical_form(const Lin& gamma_form) const {
  if (!split()) throw InvalidInput("bundle '" + p_.name + "' has no vertical/horizontal split");
  VH out;
  for (const auto& [w, c] : gamma_form) {
    Word y;
    for (int g : w) y.push_back(p_.vertical[g]);
    add_term(out, std::make_pair(Word{}, y), c);
  }
  return total().reduce(out);
}

std::vector<VH> Bundle::horizontal_basis(int degree, int kdeg) const {
  std::vector<VH> cands;
  std::vector<VH2> images;
  for (const Word& k : total().base().normal_monomials(kdeg))
    for (const Word& y : total().forms().normal_words(degree)) {
      VH w = vh_term(k, y);
      VH2 img;
      for (const auto& [key, c] : fhat(w))
        if (!key[3].empty()) add_term(img, key, c);
      cands.push_back(w);
      images.push_back(img);
    }
  std::vector<VH> out;
  for (const Comb<int>& dep : linear_dependencies(images)) {
    VH v;
    for (const auto& [i, c] : dep) axpy(v, cands[i], c);
    out.push_back(v);
  }
  return out;
}

std::vector<VH> Bundle::omega_M_basis(int degree, int kdeg) const {
  if (degree > total().cap()) return {};
  std::vector<VH> cands;
  if (split()) {
    for (const Word& k : total().base().normal_monomials(kdeg))
      for (const Word& y : total().forms().normal_words(degree)) {
        bool hor = true;
        for (int g : y) hor = hor && !is_vertical_gen(g);
        if (hor) cands.push_back(vh_term(k, y));
      }
  } else {
    cands = horizontal_basis(degree, kdeg);
  }
  std::vector<VH2> images;
  for (const VH& w : cands) {
    VH2 img = fhat(w);
    axpy(img, tensor_one(w), Scalar(-1));
    images.push_back(img);
  }
  std::vector<VH> out;
  for (const Comb<int>& dep : linear_dependencies(images)) {
    VH v;
    for (const auto& [i, c] : dep) axpy(v, cands[i], c);
    out.push_back(v);
  }
  return out;
}

AxiomReport Bundle::validate() const {
  AxiomReport rep;
  const Presentation& K = total().base();
  const Presentation& A = group();
  for (int g = 0; g < K.ngens(); ++g) {
    std::string wit = K.gen_name(g);
    Lin b = unit_word(Word{g});
    Coact f = F(b);
    Lin eps;
    for (const auto& [k, c] : f) add_term(eps, k.first, c * A.counit(k.second));
    rep.check(eps == b, "qpb2 counit", wit);
    Comb<std::array<Word, 3>> left, right;
    for (const auto& [k, c] : f) {
      for (const auto& [k2, c2] : F(unit_word(k.first))) add_term(left, std::array<Word, 3>{k2.first, k2.second, k.second}, c * c2);
      for (const auto& [legs, c2] : A.coproduct(k.second).terms)
        add_term(right, std::array<Word, 3>{k.first, legs[0], legs[1]}, c * c2);
    }
    rep.check(left == right, "qpb2 coassociativity", wit);
  }
  AxiomReport alg = total().validate();
  rep.checks += alg.checks;
  for (auto& f : alg.failures) rep.failures.push_back(f);
  std::vector<VH> gens = twisted_samples(total(), false);
  const int cap = total().cap();
  auto deg = [](const VH& x) { return std::max(vh_degree(x), 0); };
  for (const VH& a : gens) {
    std::string wit = render(a);
    VH2 fa = fhat(a);
    rep.check(fhat(total().star(a)) == star2(fa), "F^ star", wit);
    if (deg(a) + 1 <= cap) rep.check(fhat(total().d(a)) == d2(fa), "F^ intertwines d", wit);
    for (const VH& b : gens) {
      if (deg(a) + deg(b) > cap) continue;
      rep.check(fhat(total().mul(a, b)) == mul2(fa, fhat(b)), "F^ multiplicative", wit + " | " + render(b));
    }
  }
  return rep;
}

std::string Bundle::render(const VH2& x) const {
  return render_comb(x, [this](const std::array<Word, 4>& k) {
    std::string l = total().render(vh_term(k[0], k[1]));
    std::string r = group_total().render(vh_term(k[2], k[3]));
    return "[" + l + "] (x) [" + r + "]";
  });
}

// ---------------------------------------------------------------------------
// Construction

std::shared_ptr<GradedAlgebra> frak_l_algebra(const HorData& hor, const FormAlgebra& gf) {
  const Calculus& G = gf.calculus();
  const int nv = G.dim();
  const int nh = static_cast<int>(hor.gens.size());
  const int cap = gf.cap();
  std::vector<std::string> names = G.basis();
  for (const auto& g : hor.gens) names.push_back(g);
  std::vector<Lin> rels;
  for (int k = 2; k <= cap; ++k)
    for (const Lin& r : gf.algebra().new_relations(k)) rels.push_back(r);
  for (const Lin& r : hor.relations) rels.push_back(shift(r, nv));
  for (int v = 0; v < nv; ++v)
    for (int l = 0; l < nh; ++l) {
      Lin r = unit_word(Word{v, nv + l});
      for (const auto& [key, c] : hor.chi[l])
        for (const auto& [vw, cv] : G.circ(Word{v}, key.second))
          add_term(r, concat(shift_word(key.first, nv), vw), c * cv);
      rels.push_back(r);
    }
  auto alg = std::make_shared<GradedAlgebra>(names, cap, rels);
  GradedAlgebra lstar(hor.gens, cap, hor.relations);
  for (int k = 0; k <= cap; ++k) {
    int expect = 0;
    for (int a = 0; a <= k; ++a) expect += lstar.dim(a) * gf.algebra().dim(k - a);
    if (alg->dim(k) != expect)
      throw InvalidInput("twisted tensor product for '" + hor.name + "' has dimension " + std::to_string(alg->dim(k)) +
                         " in degree " + std::to_string(k) + ", expected " + std::to_string(expect));
  }
  return alg;
}

Bundle omega_build(const HorData& hor, std::shared_ptr<const FormAlgebra> gamma_forms) {
  const FormAlgebra& gf = *gamma_forms;
  const Calculus& G = gf.calculus();
  const int nv = G.dim();
  const int nh = static_cast<int>(hor.gens.size());
  const int ng = hor.total->ngens();
  auto bad = [&hor](const std::string& what) { return InvalidInput("reconstruction precondition failed for '" + hor.name + "': " + what); };
  if (static_cast<int>(hor.circ.size()) != nh || static_cast<int>(hor.D.size()) != nh ||
      static_cast<int>(hor.star.size()) != nh || static_cast<int>(hor.chi.size()) != nh)
    throw bad("horizontal tables must have one row per generator");
  if (static_cast<int>(hor.kappa.size()) != ng) throw bad("kappa table size");
  if (static_cast<int>(hor.R.size()) != nv) throw bad("curvature table size");

  auto forms = frak_l_algebra(hor, gf);
  TwistedAlgebra::Tables t;
  t.name = hor.name;
  t.base = hor.total;
  t.forms = forms;
  t.circ.assign(nv + nh, std::vector<Lin>(ng));
  t.dform.resize(nv + nh);
  t.star.resize(nv + nh);
  for (int g = 0; g < ng; ++g) {
    Lin jg = hor.j.apply(Word{g});
    for (int v = 0; v < nv; ++v) t.circ[v][g] = G.circ(Calculus::unit_form(v), jg);
    for (int l = 0; l < nh; ++l) t.circ[nv + l][g] = shift(hor.circ[l][g], nv);
    t.theta.push_back(sum(shift(hor.kappa[g], nv), G.pi(jg)));
  }
  for (int v = 0; v < nv; ++v) {
    t.dform[v] = sum(gf.d(Calculus::unit_form(v)), shift(hor.R[v], nv));
    t.star[v] = gf.star(Calculus::unit_form(v));
  }
  for (int l = 0; l < nh; ++l) {
    t.dform[nv + l] = shift(hor.D[l], nv);
    for (const auto& [key, c] : hor.chi[l])
      for (const auto& [vw, cv] : G.pi(key.second)) add_term(t.dform[nv + l], concat(shift_word(key.first, nv), vw), -c * cv);
    t.star[nv + l] = shift(hor.star[l], nv);
  }
  Bundle::Parts p;
  p.name = hor.name;
  p.total = std::make_shared<TwistedAlgebra>(t);
  p.group_forms = gamma_forms;
  p.j = hor.j;
  for (int v = 0; v < nv; ++v) {
    VH2 f;
    add_term(f, std::array<Word, 4>{Word{}, Word{}, Word{}, Word{v}}, Scalar(1));
    const auto& row = G.varpi_row(v);
    for (int u = 0; u < nv; ++u)
      for (const auto& [a, c] : row[u]) add_term(f, std::array<Word, 4>{Word{}, Word{u}, a, Word{}}, c);
    p.fhat_forms.push_back(f);
    p.vertical.push_back(v);
  }
  for (int l = 0; l < nh; ++l) {
    VH2 f;
    for (const auto& [key, c] : hor.chi[l]) add_term(f, std::array<Word, 4>{Word{}, shift_word(key.first, nv), key.second, Word{}}, c);
    p.fhat_forms.push_back(f);
  }
  Bundle B(std::move(p));
  // E-conditions: D and R must make d square to zero and respect every relation.
  const TwistedAlgebra& T = B.total();
  for (const VH& a : twisted_samples(T, false)) {
    if (std::max(vh_degree(a), 0) + 2 > T.cap()) continue;
    if (!T.d(T.d(a)).empty()) throw bad("d^2 != 0 on " + T.render(a));
  }
  return B;
}

HorData trivial_hor_data(const BaseDGA& base, std::shared_ptr<const Presentation> group) {
  HorData h;
  h.name = "trivial-" + base.name;
  h.total = group;
  std::vector<Lin> ids;
  for (int g = 0; g < group->ngens(); ++g) ids.push_back(unit_word(Word{g}));
  h.j = HopfMorphism(group.get(), group.get(), ids);
  h.gens = base.algebra->gens();
  h.relations = base.relations;
  const int nh = static_cast<int>(h.gens.size());
  h.circ.assign(nh, std::vector<Lin>(group->ngens()));
  for (int l = 0; l < nh; ++l)
    for (int g = 0; g < group->ngens(); ++g) h.circ[l][g] = scaled(unit_word(Word{l}), group->counit(Word{g}));
  h.kappa.assign(group->ngens(), Lin{});
  h.D = base.d;
  h.star = base.star;
  for (int l = 0; l < nh; ++l) {
    Coact c;
    add_term(c, std::make_pair(Word{l}, Word{}), Scalar(1));
    h.chi.push_back(c);
  }
  return h;
}

Bundle make_trivial_bundle(const BaseDGA& base, std::shared_ptr<const FormAlgebra> gamma_forms) {
  HorData h = trivial_hor_data(base, gamma_forms->calculus().group_ptr());
  h.R.assign(gamma_forms->calculus().dim(), Lin{});
  h.name = "trivial-" + base.name + "-" + gamma_forms->calculus().name();
  return omega_build(h, gamma_forms);
}

HorData degenerate_hor_data(std::shared_ptr<const Presentation> total, const HopfMorphism& j, int ngamma) {
  HorData h;
  h.name = "degenerate";
  h.total = std::move(total);
  h.j = j;
  h.kappa.assign(h.total->ngens(), Lin{});
  h.R.assign(ngamma, Lin{});
  return h;
}

Bundle make_full_bundle(std::shared_ptr<const FormAlgebra> psi_forms, std::shared_ptr<const FormAlgebra> gamma_forms,
                        const HopfMorphism& j) {
  const Calculus& P = psi_forms->calculus();
  const Calculus& G = gamma_forms->calculus();
  const int n = P.dim();
  const int ng = P.group().ngens();
  TwistedAlgebra::Tables t;
  t.name = P.name() + "-total";
  t.base = P.group_ptr();
  t.forms = std::shared_ptr<const GradedAlgebra>(psi_forms, &psi_forms->algebra());
  t.circ.assign(n, std::vector<Lin>(ng));
  for (int y = 0; y < n; ++y) {
    for (int g = 0; g < ng; ++g) t.circ[y][g] = P.circ1(y, Word{g});
    t.dform.push_back(psi_forms->d(Calculus::unit_form(y)));
    t.star.push_back(psi_forms->star(Calculus::unit_form(y)));
  }
  for (int g = 0; g < ng; ++g) t.theta.push_back(P.pi(Word{g}));
  Bundle::Parts p;
  p.name = P.name() + "/" + G.name();
  p.total = std::make_shared<TwistedAlgebra>(t);
  p.group_forms = gamma_forms;
  p.j = j;
  for (int y = 0; y < n; ++y) {
    VH2 f;
    const Lin& pre = P.preimage(y);
    for (const auto& [legs, c] : P.group().adjoint(pre).terms)
      for (const auto& [fw, fc] : P.pi(legs[0]))
        for (const auto& [a, ca] : j.apply(legs[1])) add_term(f, std::array<Word, 4>{Word{}, fw, a, Word{}}, c * fc * ca);
    for (const auto& [gw, gc] : G.pi(j.apply(pre))) add_term(f, std::array<Word, 4>{Word{}, Word{}, Word{}, gw}, gc);
    p.fhat_forms.push_back(f);
  }
  return Bundle(std::move(p));
}

HopfMorphism hopf_fibration_map(const Presentation& suq2, const Presentation& u1) {
  std::vector<Lin> images(suq2.ngens());
  images[suq2.gen_index("alpha")] = unit_word(Word{u1.gen_index("z")});
  images[suq2.gen_index("alpha*")] = unit_word(Word{u1.gen_index("z*")});
  return HopfMorphism(&suq2, &u1, images);
}

// ---------------------------------------------------------------------------
// Homogeneous bundles

namespace {

// Solves target = sum_i x_i basis_i; returns x or throws.
Comb<int> solve_in_span(const std::vector<Lin>& basis, const Lin& target, const std::string& what) {
  std::vector<Lin> vecs = basis;
  vecs.push_back(target);
  const int last = static_cast<int>(basis.size());
  for (const Comb<int>& dep : linear_dependencies(vecs)) {
    auto it = dep.find(last);
    if (it == dep.end()) continue;
    Scalar s = -it->second.inv();
    Comb<int> out;
    for (const auto& [i, c] : dep)
      if (i != last) add_term(out, i, c * s);
    return out;
  }
  throw InvalidInput(what);
}

}  // namespace

Lin HomogeneousBundle::kappa_perp(const Lin& psi_form) const {
  std::vector<Lin> basis = L;
  basis.insert(basis.end(), Lperp.begin(), Lperp.end());
  Comb<int> x = solve_in_span(basis, psi_form, "form outside the splitting");
  Lin out;
  for (const auto& [i, c] : x)
    if (i < static_cast<int>(L.size())) add_term(out, Word{i}, c);
  return out;
}

Lin HomogeneousBundle::kappa(const Lin& b) const { return kappa_perp(psi->pi(b)); }

std::vector<std::pair<Lin, Lin>> HomogeneousBundle::translation(const Lin& a) const {
  const Presentation& H = psi->group();
  const Presentation& A = gamma_forms->calculus().group();
  std::vector<Lin> pre(A.ngens());
  for (int g = 0; g < H.ngens(); ++g) {
    Lin jg = j.apply(Word{g});
    if (jg.size() == 1 && jg.begin()->second.is_one() && jg.begin()->first.size() == 1) {
      int a_gen = jg.begin()->first[0];
      if (pre[a_gen].empty()) pre[a_gen] = unit_word(Word{g});
    }
  }
  std::vector<std::pair<Lin, Lin>> out;
  for (const auto& [w, c] : a) {
    Lin b = unit_word(Word{});
    for (int g : w) {
      if (pre[g].empty()) throw InvalidInput("qpb4: no preimage for " + A.gen_name(g));
      b = H.mul(b, pre[g]);
    }
    for (const auto& [legs, cs] : H.comultiply(b).terms)
      out.emplace_back(scaled(H.antipode(legs[0]), c * cs), unit_word(legs[1]));
  }
  return out;
}

HomogeneousBundle make_homogeneous_bundle(std::shared_ptr<const Calculus> psi, std::shared_ptr<const FormAlgebra> gamma_forms,
                                          const HopfMorphism& j, std::vector<Lin> lperp, int cap) {
  HomogeneousBundle hb;
  hb.psi = psi;
  hb.gamma_forms = gamma_forms;
  hb.j = j;
  hb.Lperp = std::move(lperp);
  const Calculus& P = *psi;
  const Calculus& G = gamma_forms->calculus();
  const Presentation& H = P.group();
  const int n = P.dim();
  const int ng = H.ngens();
  const int nv = G.dim();

  for (int i = 0; i < n; ++i) hb.rho.push_back(G.pi(j.apply(P.preimage(i))));
  auto rho_of = [&](const Lin& form) {
    Lin out;
    for (const auto& [w, c] : form) axpy(out, hb.rho[w[0]], c);
    return out;
  };
  for (int g = 0; g < ng; ++g)
    if (rho_of(P.pi(Word{g})) != G.pi(j.apply(Word{g})))
      throw InvalidInput("rho pi' != pi j on " + H.gen_name(g));
  for (const Lin& r : P.ideal())
    if (!G.pi(j.apply(r)).empty()) throw InvalidInput("j does not map the ideal of " + P.name() + " into the ideal of " + G.name());

  for (const Comb<int>& dep : linear_dependencies(hb.rho)) {
    Lin l;
    for (const auto& [i, c] : dep) add_term(l, Word{i}, c);
    hb.L.push_back(l);
  }
  if (static_cast<int>(hb.L.size() + hb.Lperp.size()) != n) throw InvalidInput("splitting dimensions do not add up");
  for (int v = 0; v < nv; ++v) {
    std::vector<Lin> imgs;
    for (const Lin& p : hb.Lperp) imgs.push_back(rho_of(p));
    Comb<int> x = solve_in_span(imgs, Calculus::unit_form(v), "rho is not onto on the complement");
    Lin lift;
    for (const auto& [i, c] : x) axpy(lift, hb.Lperp[i], c);
    hb.lift.push_back(lift);
  }
  for (const Lin& p : hb.Lperp)
    for (int g = 0; g < ng; ++g)
      if (!hb.kappa_perp(P.circ(p, unit_word(Word{g}))).empty())
        throw InvalidInput("invalid splitting: complement is not stable under the right action");

  HorData& h = hb.hor;
  h.name = "homogeneous-" + P.name();
  h.total = psi->group_ptr();
  h.j = j;
  const int nh = static_cast<int>(hb.L.size());
  for (int l = 0; l < nh; ++l) {
    const Lin& x = hb.L[l];
    bool single = x.size() == 1 && x.begin()->second.is_one();
    h.gens.push_back(single ? P.basis()[x.begin()->first[0]] : "l" + std::to_string(l));
  }
  auto in_L = [&](const Lin& form, const std::string& what) {
    Lin k = hb.kappa_perp(form);
    Lin back;
    for (const auto& [w, c] : k) axpy(back, hb.L[w[0]], c);
    if (back != form) throw InvalidInput("L is not " + what);
    return k;
  };
  h.circ.assign(nh, std::vector<Lin>(ng));
  for (int l = 0; l < nh; ++l) {
    for (int g = 0; g < ng; ++g) h.circ[l][g] = in_L(P.circ(hb.L[l], unit_word(Word{g})), "stable under the right action");
    h.star.push_back(in_L(P.star(hb.L[l]), "star-invariant"));
  }
  for (int i = 0; i < n; ++i) {
    Coact c;
    for (const auto& [legs, cs] : H.adjoint(P.preimage(i)).terms)
      for (const auto& [fw, fc] : P.pi(legs[0]))
        for (const auto& [a, ca] : j.apply(legs[1])) add_term(c, std::make_pair(fw, a), cs * fc * ca);
    hb.chi.push_back(c);
  }
  for (const Lin& r : P.ideal()) {
    Coact c;
    for (const auto& [legs, cs] : H.adjoint(r).terms)
      for (const auto& [fw, fc] : P.pi(legs[0]))
        for (const auto& [a, ca] : j.apply(legs[1])) add_term(c, std::make_pair(fw, a), cs * fc * ca);
    if (!c.empty()) throw InvalidInput("calculus " + P.name() + " is not right covariant relative to j");
  }
  for (int l = 0; l < nh; ++l) {
    std::map<Word, Lin> by_a;
    for (const auto& [w, c] : hb.L[l])
      for (const auto& [key, cc] : hb.chi[w[0]]) add_term(by_a[key.second], key.first, c * cc);
    Coact out;
    for (const auto& [a, form] : by_a)
      for (const auto& [lw, lc] : in_L(form, "invariant under the relative coaction"))
        add_term(out, std::make_pair(lw, a), lc);
    h.chi.push_back(out);
  }
  for (int g = 0; g < ng; ++g) h.kappa.push_back(hb.kappa(unit_word(Word{g})));

  // degree-two relations from the ideal, closed under the right action
  auto circ_LL = [&](const Lin& x, int g) {
    Lin out;
    for (const auto& [w, c] : x)
      for (const auto& [legs, cs] : H.coproduct(Word{g}).terms) {
        Lin a = unit_word(Word{w[0]}), b = unit_word(Word{w[1]});
        Lin ac, bc;
        ac = a;
        for (int k : legs[0]) {
          Lin nx;
          for (const auto& [u, cu] : ac) axpy(nx, h.circ[u[0]][k], cu);
          ac = nx;
        }
        bc = b;
        for (int k : legs[1]) {
          Lin nx;
          for (const auto& [u, cu] : bc) axpy(nx, h.circ[u[0]][k], cu);
          bc = nx;
        }
        axpy(out, tensor_words(ac, bc), c * cs);
      }
    return out;
  };
  auto germ_L = [&](const Lin& b) {
    Lin out;
    for (const auto& [legs, c] : H.comultiply(b).terms) axpy(out, tensor_words(hb.kappa(unit_word(legs[0])), hb.kappa(unit_word(legs[1]))), c);
    return out;
  };
  RowSpace k1;
  std::deque<Lin> todo;
  for (const Lin& r : P.ideal()) {
    Lin w = germ_L(r);
    if (k1.insert(w)) todo.push_back(w);
  }
  while (!todo.empty()) {
    Lin v = todo.front();
    todo.pop_front();
    for (int g = 0; g < ng; ++g) {
      Lin w = circ_LL(v, g);
      if (k1.insert(w)) todo.push_back(w);
    }
  }
  for (const auto& [piv, row] : k1.rows()) hb.K1.push_back(row);

  GradedAlgebra l2(h.gens, cap, hb.K1);
  auto preimage_of = [&](const Lin& form) {
    Lin b;
    for (const auto& [w, c] : form) axpy(b, P.preimage(w[0]), c);
    return H.normalize(b);
  };
  for (int v = 0; v < nv; ++v) {
    Lin q = preimage_of(hb.lift[v]);
    h.R.push_back(l2.reduce(scaled(germ_L(q), Scalar(-1))));
  }
  for (int l = 0; l < nh; ++l) {
    Lin b = preimage_of(hb.L[l]);
    h.D.push_back(l2.reduce(scaled(germ_L(b), Scalar(-1))));
  }
  RowSpace k2;
  if (cap >= 3) {
    for (int v = 0; v < nv; ++v)
      for (int l = 0; l < nh; ++l) {
        Lin rel = tensor_words(h.R[v], unit_word(Word{l}));
        for (const auto& [key, c] : h.chi[l]) {
          Lin moved;
          for (const auto& [vw, cv] : G.circ(Word{v}, key.second)) axpy(moved, h.R[vw[0]], cv);
          axpy(rel, tensor_words(unit_word(key.first), moved), -c);
        }
        rel = l2.reduce(rel);
        if (!rel.empty()) k2.insert(rel);
      }
  }
  for (const auto& [piv, row] : k2.rows()) hb.K2.push_back(row);
  h.relations = hb.K1;
  h.relations.insert(h.relations.end(), hb.K2.begin(), hb.K2.end());
  hb.Lstar = std::make_shared<GradedAlgebra>(h.gens, cap, h.relations);
  for (auto& r : h.R) r = hb.Lstar->reduce(r);
  for (auto& d : h.D) d = hb.Lstar->reduce(d);
  if (gamma_forms->cap() != cap) throw InvalidInput("group forms and horizontal forms need the same degree cap");
  hb.bundle = std::make_shared<Bundle>(omega_build(h, gamma_forms));
  return hb;
}

VH horizontal_d(const Bundle& B, const VH& phi) {
  VH out;
  for (const auto& [k, c] : B.total().d(phi)) {
    bool hor = true;
    for (int y : k.second) hor = hor && !B.is_vertical_gen(y);
    if (hor) add_term(out, k, c);
  }
  return out;
}

VH curvature_from_D(const Bundle& B, const std::vector<std::pair<Lin, Lin>>& pairs) {
  VH out;
  for (const auto& [q, b] : pairs) {
    VH dd = horizontal_d(B, horizontal_d(B, vh_from_base(b)));
    axpy(out, B.total().mul(vh_from_base(q), dd), Scalar(-1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// VerAlgebra

VerAlgebra::VerAlgebra(std::shared_ptr<const Presentation> total, HopfMorphism j, std::shared_ptr<const FormAlgebra> gamma_forms)
    : total_(std::move(total)), j_(std::move(j)), gf_(std::move(gamma_forms)) {}

Coact VerAlgebra::F(const Word& b) const {
  Coact out;
  for (const auto& [legs, c] : total_->coproduct(b).terms)
    for (const auto& [a, ca] : j_.apply(legs[1])) add_term(out, std::make_pair(legs[0], a), c * ca);
  return out;
}

VH VerAlgebra::mul(const VH& a, const VH& b) const {
  VH out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b)
      for (const auto& [f, cf] : F(kb.first)) {
        Lin form = gf_->mul(gf_->circ(unit_word(ka.second), unit_word(f.second)), unit_word(kb.second));
        for (const auto& [w, cw] : total_->normal_form(concat(ka.first, f.first)))
          for (const auto& [y, cy] : form) add_term(out, std::make_pair(w, y), ca * cb * cf * cw * cy);
      }
  return out;
}

VH VerAlgebra::star(const VH& a) const {
  const Presentation& A = gf_->calculus().group();
  VH out;
  for (const auto& [k, c] : a) {
    Lin ts = gf_->star(unit_word(k.second));
    for (const auto& [f, cf] : F(k.first)) {
      Lin form = gf_->circ(ts, A.star(unit_word(f.second)));
      for (const auto& [w, cw] : total_->star(unit_word(f.first)))
        for (const auto& [y, cy] : form) add_term(out, std::make_pair(w, y), c.conj() * cf.conj() * cw * cy);
    }
  }
  return out;
}

VH VerAlgebra::d(const VH& a) const {
  const Calculus& G = gf_->calculus();
  VH out;
  for (const auto& [k, c] : a) {
    for (const auto& [y, cy] : gf_->d(unit_word(k.second))) add_term(out, std::make_pair(k.first, y), c * cy);
    for (const auto& [f, cf] : F(k.first))
      for (const auto& [y, cy] : gf_->mul(G.pi(f.second), unit_word(k.second)))
        add_term(out, std::make_pair(f.first, y), c * cf * cy);
  }
  return out;
}

VH VerAlgebra::d_printed(const VH& a) const {
  const Calculus& G = gf_->calculus();
  std::map<Word, Lin> by_form;
  for (const auto& [k, c] : a) add_term(by_form[k.second], k.first, c);
  VH out;
  for (const auto& [t, b] : by_form) {
    for (const auto& [y, cy] : gf_->d(unit_word(t)))
      for (const auto& [w, cw] : b) add_term(out, std::make_pair(w, y), cw * cy);
    Lin germ;
    for (const auto& [w, cw] : b)
      for (const auto& [f, cf] : F(w)) axpy(germ, G.pi(f.second), cw * cf);
    for (const auto& [y, cy] : gf_->mul(germ, unit_word(t)))
      for (const auto& [w, cw] : b) add_term(out, std::make_pair(w, y), cw * cy);
  }
  return out;
}

}  // namespace qpb
