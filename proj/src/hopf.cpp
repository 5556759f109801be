#include "qpb/hopf.hpp"

#include <algorithm>

#include "qpb/errors.hpp"
#include "qpb/expr.hpp"

namespace qpb {

// ---- HopfElement

namespace {
const Presentation* common(const HopfElement& a, const HopfElement& b) {
  if (a.pres() && b.pres() && a.pres() != b.pres())
    throw DomainMismatch("elements of '" + a.pres()->name() + "' and '" + b.pres()->name() + "'");
  return a.pres() ? a.pres() : b.pres();
}
}  // namespace

HopfElement operator+(const HopfElement& a, const HopfElement& b) {
  return HopfElement(common(a, b), sum(a.terms(), b.terms()));
}

HopfElement operator-(const HopfElement& a, const HopfElement& b) {
  return HopfElement(common(a, b), sum(a.terms(), b.terms(), Scalar(-1)));
}

HopfElement operator*(const HopfElement& a, const HopfElement& b) {
  const Presentation* p = common(a, b);
  if (!p) return HopfElement();
  return HopfElement(p, p->mul(a.terms(), b.terms()));
}

HopfElement operator*(const Scalar& c, const HopfElement& a) { return HopfElement(a.pres(), scaled(a.terms(), c)); }

bool operator==(const HopfElement& a, const HopfElement& b) {
  common(a, b);
  return a.terms() == b.terms();
}

std::string HopfElement::str() const { return p_ ? p_->render(t_) : render_comb(t_, [](const Word&) { return ""; }); }

// ---- tensors

Sweedler as_tensor(const Lin& x) {
  Sweedler s;
  s.legs = 1;
  for (const auto& [w, c] : x) s.terms.emplace(std::vector<Word>{w}, c);
  return s;
}

Lin multiply_legs(const Presentation& p, const Sweedler& s) {
  Lin out;
  for (const auto& [k, c] : s.terms) {
    Lin prod{{Word{}, Scalar(1)}};
    for (const Word& w : k) prod = p.mul(prod, Lin{{w, Scalar(1)}});
    axpy(out, prod, c);
  }
  return out;
}

// ---- Presentation

Presentation::Presentation(std::string name, std::vector<std::string> gens, std::vector<int> star,
                           std::vector<Rule> rules)
    : name_(std::move(name)), gens_(std::move(gens)), star_(std::move(star)), rules_(std::move(rules)) {
  int n = ngens();
  if (static_cast<int>(star_.size()) != n) throw InvalidInput("star table size differs from generator count");
  for (int g = 0; g < n; ++g)
    if (star_[g] < 0 || star_[g] >= n || star_[star_[g]] != g)
      throw InvalidInput("star partner of '" + gens_[g] + "' is not an involution");
  rules_by_first_.assign(n, {});
  for (size_t r = 0; r < rules_.size(); ++r) {
    if (rules_[r].lhs.empty()) throw InvalidInput("relation with empty left side");
    rules_by_first_[rules_[r].lhs[0]].push_back(static_cast<int>(r));
  }
  cop_.assign(n, Sweedler{});
  eps_.assign(n, Scalar(0));
  kappa_.assign(n, Lin{});
  have_cop_.assign(n, false);
  have_eps_.assign(n, false);
  have_kappa_.assign(n, false);
}

int Presentation::gen_index(const std::string& name) const {
  for (int g = 0; g < ngens(); ++g)
    if (gens_[g] == name) return g;
  return -1;
}

void Presentation::set_coproduct(int g, Sweedler s) {
  cop_[g] = std::move(s);
  have_cop_[g] = true;
  cop_cache_.clear();
}

void Presentation::set_counit(int g, Scalar c) {
  eps_[g] = std::move(c);
  have_eps_[g] = true;
}

void Presentation::set_antipode(int g, Lin a) {
  kappa_[g] = normalize(a);
  have_kappa_[g] = true;
  kappa_cache_.clear();
}

void Presentation::require_tables() const {
  for (int g = 0; g < ngens(); ++g)
    if (!have_cop_[g] || !have_eps_[g] || !have_kappa_[g])
      throw SpecIncomplete("structure tables missing for generator '" + gens_[g] + "'");
}

void Presentation::derive_from_matrices(const std::vector<std::vector<std::vector<Lin>>>& mats) {
  std::vector<std::vector<std::vector<Lin>>> u = mats;
  for (auto& m : u)
    for (auto& row : m)
      for (auto& e : row) e = normalize(e);
  for (int g = 0; g < ngens(); ++g) {
    bool found = false;
    for (const auto& m : u) {
      size_t n = m.size();
      for (size_t i = 0; i < n && !found; ++i) {
        for (size_t j = 0; j < n && !found; ++j) {
          const Lin& e = m[i][j];
          if (e.size() != 1 || e.begin()->first != Word{g}) continue;
          Scalar inv = e.begin()->second.inv();
          Sweedler s;
          for (size_t k = 0; k < n; ++k)
            for (const auto& [wa, ca] : m[i][k])
              for (const auto& [wb, cb] : m[k][j]) add_term(s.terms, std::vector<Word>{wa, wb}, ca * cb * inv);
          set_coproduct(g, s);
          set_counit(g, i == j ? inv : Scalar(0));
          set_antipode(g, scaled(star(m[j][i]), inv));
          found = true;
        }
      }
      if (found) break;
    }
    if (!found) throw SpecIncomplete("generator '" + gens_[g] + "' is not an entry of any corepresentation matrix");
  }
}

Lin Presentation::reduce_once_at(const Word& w, size_t pos, int rule) const {
  const Rule& r = rules_[rule];
  Lin out;
  Word prefix(w.begin(), w.begin() + pos);
  Word suffix(w.begin() + pos + r.lhs.size(), w.end());
  for (const auto& [rw, c] : r.rhs) add_term(out, concat(concat(prefix, rw), suffix), c);
  return out;
}

namespace {
bool matches_at(const Word& w, size_t pos, const Word& lhs) {
  if (pos + lhs.size() > w.size()) return false;
  return std::equal(lhs.begin(), lhs.end(), w.begin() + pos);
}
}  // namespace

bool Presentation::is_normal(const Word& w) const {
  for (size_t pos = 0; pos < w.size(); ++pos)
    for (int r : rules_by_first_[w[pos]])
      if (matches_at(w, pos, rules_[r].lhs)) return false;
  return true;
}

Lin Presentation::normal_form(const Word& w) const {
  auto it = nf_cache_.find(w);
  if (it != nf_cache_.end()) return it->second;
  Lin out;
  bool reduced = false;
  for (size_t pos = 0; pos < w.size() && !reduced; ++pos) {
    for (int r : rules_by_first_[w[pos]]) {
      if (!matches_at(w, pos, rules_[r].lhs)) continue;
      for (const auto& [v, c] : reduce_once_at(w, pos, r)) axpy(out, normal_form(v), c);
      reduced = true;
      break;
    }
  }
  if (!reduced) out.emplace(w, Scalar(1));
  nf_cache_.emplace(w, out);
  return out;
}

Lin Presentation::normalize(const Lin& x) const {
  Lin out;
  for (const auto& [w, c] : x) axpy(out, normal_form(w), c);
  return out;
}

Lin Presentation::mul(const Lin& a, const Lin& b) const {
  Lin out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) axpy(out, normal_form(concat(wa, wb)), ca * cb);
  return out;
}

std::vector<Word> Presentation::normal_monomials(int max_degree) const {
  std::vector<Word> out{Word{}};
  std::vector<Word> layer{Word{}};
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<Word> next;
    for (const Word& w : layer)
      for (int g = 0; g < ngens(); ++g) {
        Word v = w;
        v.push_back(g);
        if (is_normal(v)) next.push_back(v);
      }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

Scalar Presentation::counit(const Word& w) const {
  Scalar out(1);
  for (int g : w) {
    if (!have_eps_[g]) throw SpecIncomplete("counit missing for '" + gens_[g] + "'");
    out *= eps_[g];
    if (out.is_zero()) break;
  }
  return out;
}

Scalar Presentation::counit(const Lin& x) const {
  Scalar out;
  for (const auto& [w, c] : x) out += c * counit(w);
  return out;
}

Lin Presentation::antipode(const Word& w) const {
  auto it = kappa_cache_.find(w);
  if (it != kappa_cache_.end()) return it->second;
  Lin out{{Word{}, Scalar(1)}};
  for (auto g = w.rbegin(); g != w.rend(); ++g) {
    if (!have_kappa_[*g]) throw SpecIncomplete("antipode missing for '" + gens_[*g] + "'");
    out = mul(out, kappa_[*g]);
  }
  kappa_cache_.emplace(w, out);
  return out;
}

Lin Presentation::antipode(const Lin& x) const {
  Lin out;
  for (const auto& [w, c] : x) axpy(out, antipode(w), c);
  return out;
}

Lin Presentation::star(const Lin& x) const {
  Lin out;
  for (const auto& [w, c] : x) {
    Word v;
    for (auto g = w.rbegin(); g != w.rend(); ++g) v.push_back(star_[*g]);
    axpy(out, normal_form(v), c.conj());
  }
  return out;
}

Sweedler Presentation::tensor_mul(const Sweedler& a, const Sweedler& b) const {
  Sweedler out;
  out.legs = a.legs;
  if (a.legs != b.legs) throw DomainMismatch("tensor legs differ");
  for (const auto& [ka, ca] : a.terms) {
    for (const auto& [kb, cb] : b.terms) {
      // expand the product leg by leg
      Comb<std::vector<Word>> partial{{std::vector<Word>{}, ca * cb}};
      for (int l = 0; l < a.legs; ++l) {
        Lin leg = normal_form(concat(ka[l], kb[l]));
        Comb<std::vector<Word>> next;
        for (const auto& [pk, pc] : partial)
          for (const auto& [w, c] : leg) {
            std::vector<Word> k = pk;
            k.push_back(w);
            add_term(next, k, pc * c);
          }
        partial = std::move(next);
      }
      for (const auto& [k, c] : partial) add_term(out.terms, k, c);
    }
  }
  return out;
}

const Sweedler& Presentation::coproduct(const Word& w) const {
  auto it = cop_cache_.find(w);
  if (it != cop_cache_.end()) return it->second;
  Sweedler s;
  if (w.empty()) {
    s.terms.emplace(std::vector<Word>{Word{}, Word{}}, Scalar(1));
  } else {
    int g = w.back();
    if (!have_cop_[g]) throw SpecIncomplete("coproduct missing for '" + gens_[g] + "'");
    Word prefix(w.begin(), w.end() - 1);
    s = tensor_mul(coproduct(prefix), cop_[g]);
  }
  return cop_cache_.emplace(w, std::move(s)).first->second;
}

Sweedler Presentation::comultiply(const Lin& x, int legs) const {
  if (legs < 1) throw InvalidInput("comultiply needs at least one leg");
  Sweedler s = as_tensor(x);
  for (int l = 1; l < legs; ++l) s = map_leg(s, 0, [this](const Word& w) { return coproduct(w); }, 2);
  return s;
}

Sweedler Presentation::adjoint(const Lin& x) const {
  Sweedler three = comultiply(x, 3);
  Sweedler out;
  for (const auto& [k, c] : three.terms) {
    Lin right = mul(antipode(k[0]), Lin{{k[2], Scalar(1)}});
    for (const auto& [w, cw] : right) add_term(out.terms, std::vector<Word>{k[1], w}, c * cw);
  }
  return out;
}

HopfElement Presentation::parse(std::string_view text) const {
  Lin free = parse_free(text, [this](const std::string& n) { return gen_index(n); });
  return elem(free);
}

std::vector<std::string> Presentation::check_confluence() const {
  std::vector<std::string> bad;
  auto compare = [&](const Word& w, const Lin& a, const Lin& b) {
    if (normalize(a) != normalize(b))
      bad.push_back("overlap " + render_word(w) + ": " + render(normalize(a)) + " vs " + render(normalize(b)));
  };
  for (size_t r1 = 0; r1 < rules_.size(); ++r1) {
    const Word& l1 = rules_[r1].lhs;
    for (size_t r2 = 0; r2 < rules_.size(); ++r2) {
      const Word& l2 = rules_[r2].lhs;
      // proper overlaps: a suffix of l1 equals a prefix of l2
      for (size_t k = 1; k < l1.size() && k < l2.size(); ++k) {
        if (!std::equal(l1.end() - k, l1.end(), l2.begin())) continue;
        Word w = concat(l1, Word(l2.begin() + k, l2.end()));
        compare(w, reduce_once_at(w, 0, static_cast<int>(r1)),
                reduce_once_at(w, l1.size() - k, static_cast<int>(r2)));
      }
      // inclusions of l2 inside l1
      if (r1 != r2 && l2.size() <= l1.size()) {
        for (size_t pos = 0; pos + l2.size() <= l1.size(); ++pos) {
          if (!matches_at(l1, pos, l2)) continue;
          compare(l1, rules_[r1].rhs, reduce_once_at(l1, pos, static_cast<int>(r2)));
        }
      }
    }
  }
  return bad;
}

AxiomReport Presentation::validate_axioms(int cap) const {
  AxiomReport rep;
  require_tables();
  for (const std::string& s : check_confluence()) rep.check(false, "confluence", s);
  auto cop_leg = [this](const Word& w) { return coproduct(w); };

  // structure maps respect the relations
  for (const Rule& r : rules_) {
    Lin lhs{{r.lhs, Scalar(1)}};
    std::string wit = render_word(r.lhs);
    // multiplicative extension of phi on the free word vs on the rhs
    auto free_cop = [&](const Lin& x) {
      Sweedler s;
      for (const auto& [w, c] : x) {
        Sweedler t;
        t.terms.emplace(std::vector<Word>{Word{}, Word{}}, Scalar(1));
        for (int g : w) t = tensor_mul(t, cop_[g]);
        for (const auto& [k, v] : t.terms) add_term(s.terms, k, v * c);
      }
      return s;
    };
    auto free_kappa = [&](const Lin& x) {
      Lin out;
      for (const auto& [w, c] : x) {
        Lin p{{Word{}, Scalar(1)}};
        for (auto g = w.rbegin(); g != w.rend(); ++g) p = mul(p, kappa_[*g]);
        axpy(out, p, c);
      }
      return out;
    };
    auto free_eps = [&](const Lin& x) {
      Scalar out;
      for (const auto& [w, c] : x) {
        Scalar p(1);
        for (int g : w) p *= eps_[g];
        out += c * p;
      }
      return out;
    };
    auto free_star = [&](const Lin& x) {
      Lin out;
      for (const auto& [w, c] : x) {
        Word v;
        for (auto g = w.rbegin(); g != w.rend(); ++g) v.push_back(star_[*g]);
        axpy(out, normal_form(v), c.conj());
      }
      return out;
    };
    rep.check(free_cop(lhs) == free_cop(r.rhs), "relation/coproduct", wit);
    rep.check(free_kappa(lhs) == free_kappa(r.rhs), "relation/antipode", wit);
    rep.check(free_eps(lhs) == free_eps(r.rhs), "relation/counit", wit);
    rep.check(free_star(lhs) == free_star(r.rhs), "relation/star", wit);
  }

  for (const Word& m : normal_monomials(cap)) {
    std::string wit = m.empty() ? "1" : render_word(m);
    Lin x{{m, Scalar(1)}};
    const Sweedler& phi = coproduct(m);
    Sweedler left = map_leg(phi, 0, cop_leg, 2);
    Sweedler right = map_leg(phi, 1, cop_leg, 2);
    rep.check(left == right, "coassociativity", wit);

    Lin el, er;
    Lin sl, sr;
    for (const auto& [k, c] : phi.terms) {
      axpy(el, Lin{{k[1], Scalar(1)}}, c * counit(k[0]));
      axpy(er, Lin{{k[0], Scalar(1)}}, c * counit(k[1]));
      axpy(sl, mul(antipode(k[0]), Lin{{k[1], Scalar(1)}}), c);
      axpy(sr, mul(Lin{{k[0], Scalar(1)}}, antipode(k[1])), c);
    }
    rep.check(el == x, "counit (eps(x)id)phi", wit);
    rep.check(er == x, "counit (id(x)eps)phi", wit);
    Lin unit;
    add_term(unit, Word{}, counit(m));
    rep.check(sl == unit, "antipode m(kappa(x)id)phi", wit);
    rep.check(sr == unit, "antipode m(id(x)kappa)phi", wit);

    Lin ms = star(x);
    Sweedler phis = comultiply(ms);
    Sweedler starred;
    for (const auto& [k, c] : phi.terms) {
      Lin a = star(Lin{{k[0], Scalar(1)}});
      Lin b = star(Lin{{k[1], Scalar(1)}});
      for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b) add_term(starred.terms, std::vector<Word>{wa, wb}, c.conj() * ca * cb);
    }
    rep.check(phis == starred, "star/coproduct", wit);
    rep.check(star(ms) == x, "star involution", wit);
    rep.check(antipode(star(antipode(ms))) == x, "kappa(kappa(x*)*) = x", wit);
  }
  return rep;
}

std::string Presentation::render_word(const Word& w) const {
  std::string out;
  for (size_t k = 0; k < w.size();) {
    size_t e = k;
    while (e < w.size() && w[e] == w[k]) ++e;
    if (!out.empty()) out += " ";
    out += gens_[w[k]];
    if (e - k > 1) out += "^" + std::to_string(e - k);
    k = e;
  }
  return out;
}

std::string Presentation::render(const Lin& x) const {
  return render_comb(x, [this](const Word& w) { return render_word(w); });
}

std::string Presentation::render(const Sweedler& s) const {
  return render_comb(s.terms, [this](const std::vector<Word>& k) {
    std::string out;
    for (size_t l = 0; l < k.size(); ++l) {
      if (l) out += " (x) ";
      out += k[l].empty() ? "1" : render_word(k[l]);
    }
    return out;
  });
}

// ---- HopfMorphism

HopfMorphism::HopfMorphism(const Presentation* src, const Presentation* dst, std::vector<Lin> images)
    : src_(src), dst_(dst), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != src_->ngens()) throw InvalidInput("morphism needs one image per generator");
  for (auto& im : images_) im = dst_->normalize(im);
}

Lin HopfMorphism::apply(const Word& w) const {
  auto it = cache_.find(w);
  if (it != cache_.end()) return it->second;
  Lin out{{Word{}, Scalar(1)}};
  for (int g : w) out = dst_->mul(out, images_[g]);
  cache_.emplace(w, out);
  return out;
}

Lin HopfMorphism::apply(const Lin& x) const {
  Lin out;
  for (const auto& [w, c] : x) axpy(out, apply(w), c);
  return out;
}

HopfElement HopfMorphism::operator()(const HopfElement& x) const {
  if (x.pres() != src_) throw DomainMismatch("morphism applied outside its source");
  return HopfElement(dst_, apply(x.terms()));
}

AxiomReport HopfMorphism::validate(int cap) const {
  AxiomReport rep;
  for (const Rule& r : src_->rules()) {
    Lin diff = apply(r.lhs);
    for (const auto& [w, c] : r.rhs) axpy(diff, apply(w), -c);
    rep.check(diff.empty(), "relation respected", src_->render_word(r.lhs));
  }
  for (const Word& m : src_->normal_monomials(cap)) {
    std::string wit = m.empty() ? "1" : src_->render_word(m);
    Lin x{{m, Scalar(1)}};
    Lin jx = apply(m);
    rep.check(dst_->counit(jx) == src_->counit(m), "counit", wit);
    rep.check(dst_->antipode(jx) == apply(src_->antipode(m)), "antipode", wit);
    rep.check(dst_->star(jx) == apply(src_->star(x)), "star", wit);
    Sweedler jj;
    for (const auto& [k, c] : src_->coproduct(m).terms) {
      Lin a = apply(k[0]);
      Lin b = apply(k[1]);
      for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b) add_term(jj.terms, std::vector<Word>{wa, wb}, c * ca * cb);
    }
    rep.check(jj == dst_->comultiply(jx), "coproduct", wit);
  }
  return rep;
}

}  // namespace qpb
