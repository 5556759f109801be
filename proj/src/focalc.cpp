#include "qpb/focalc.hpp"

#include <tuple>

#include "qpb/errors.hpp"
#include "qpb/expr.hpp"

namespace qpb {

namespace {

Lin subst_params(const Lin& x, const Params& params) {
  if (params.empty()) return x;
  Lin out;
  for (const auto& [w, c] : x) {
    Scalar s = c;
    for (const auto& [v, val] : params) s = s.subst(v, val);
    add_term(out, w, s);
  }
  return out;
}

Word tail(const Word& w, size_t from = 1) { return Word(w.begin() + static_cast<long>(from), w.end()); }

}  // namespace

Lin tensor_words(const Lin& a, const Lin& b) {
  Lin out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) add_term(out, concat(wa, wb), ca * cb);
  return out;
}

Calculus::Calculus(std::shared_ptr<Presentation> group, Tables t) : group_(std::move(group)), t_(std::move(t)) {
  const int n = dim();
  const int g = group_->ngens();
  if (static_cast<int>(t_.pi.size()) != g) throw InvalidInput("calculus '" + t_.name + "': pi table size");
  if (static_cast<int>(t_.circ.size()) != n) throw InvalidInput("calculus '" + t_.name + "': circ table size");
  for (const auto& row : t_.circ)
    if (static_cast<int>(row.size()) != g) throw InvalidInput("calculus '" + t_.name + "': circ row size");
  t_.preimages.resize(n);
  bool have_all = true;
  for (const Lin& p : t_.preimages) have_all = have_all && !p.empty();
  bicovariant_ = true;
  for (const Lin& r : t_.ideal) bicovariant_ = bicovariant_ && ad_defect(r).empty();
  if (!have_all) return;
  if (bicovariant_) {
    W_.assign(n, std::vector<Lin>(n));
    for (int i = 0; i < n; ++i) {
      Sweedler ad = group_->adjoint(t_.preimages[i]);
      for (const auto& [k, c] : ad.terms) {
        for (const auto& [w, pc] : pi(k[0])) add_term(W_[i][w[0]], k[1], c * pc);
      }
      for (auto& row : W_[i]) {
        Lin clean;
        for (const auto& [w, c] : row) add_term(clean, w, c);
        row = clean;
      }
    }
  }
  star_.resize(n);
  for (int i = 0; i < n; ++i) star_[i] = scaled(pi(group_->star(group_->antipode(t_.preimages[i]))), Scalar(-1));
}

Coact Calculus::ad_defect(const Lin& r) const {
  Coact ad;
  for (const auto& [key, c] : group_->adjoint(r).terms)
    for (const auto& [fw, fc] : pi(key[0])) add_term(ad, std::make_pair(fw, key[1]), c * fc);
  return ad;
}

int Calculus::basis_index(const std::string& name) const {
  for (int i = 0; i < dim(); ++i)
    if (t_.basis[i] == name) return i;
  return -1;
}

const Lin& Calculus::preimage(int i) const {
  if (t_.preimages[i].empty()) throw SpecIncomplete("calculus '" + t_.name + "' has no preimage for " + t_.basis[i]);
  return t_.preimages[i];
}

Lin Calculus::pi(const Word& a) const {
  if (a.empty()) return {};
  auto it = pi_cache_.find(a);
  if (it != pi_cache_.end()) return it->second;
  Word rest = tail(a);
  Lin out;
  for (const auto& [w, c] : t_.pi[a[0]]) axpy(out, circ1(w[0], rest), c);
  Scalar e = group_->counit(Word{a[0]});
  if (!e.is_zero()) axpy(out, pi(rest), e);
  pi_cache_.emplace(a, out);
  return out;
}

Lin Calculus::pi(const Lin& a) const {
  Lin out;
  for (const auto& [w, c] : a) axpy(out, pi(w), c);
  return out;
}

const Lin& Calculus::circ1(int i, const Word& a) const {
  auto key = std::make_pair(i, a);
  auto it = circ_cache_.find(key);
  if (it != circ_cache_.end()) return it->second;
  Lin out;
  if (a.empty()) {
    out = unit_form(i);
  } else {
    Word head(a.begin(), a.end() - 1);
    const Lin prev = circ1(i, head);
    for (const auto& [w, c] : prev) axpy(out, t_.circ[w[0]][a.back()], c);
  }
  return circ_cache_.emplace(key, out).first->second;
}

Lin Calculus::circ_gen(const Word& x, int g) const {
  if (x.empty()) return Lin{{Word{}, group_->counit(Word{g})}};
  if (x.size() == 1) return circ1(x[0], Word{g});
  auto key = std::make_pair(x, g);
  auto it = circ_word_cache_.find(key);
  if (it != circ_word_cache_.end()) return it->second;
  Lin out;
  Word rest = tail(x);
  for (const auto& [k, c] : group_->coproduct(Word{g}).terms) {
    const Lin& head = circ1(x[0], k[0]);
    if (head.empty()) continue;
    axpy(out, tensor_words(head, circ(rest, k[1])), c);
  }
  circ_word_cache_.emplace(key, out);
  return out;
}

Lin Calculus::circ(const Word& x, const Word& a) const {
  Lin cur{{x, Scalar(1)}};
  for (int g : a) {
    Lin next;
    for (const auto& [w, c] : cur) axpy(next, circ_gen(w, g), c);
    cur = std::move(next);
  }
  return cur;
}

Lin Calculus::circ(const Lin& x, const Lin& a) const {
  Lin out;
  for (const auto& [wx, cx] : x)
    for (const auto& [wa, ca] : a) axpy(out, circ(wx, wa), cx * ca);
  return out;
}

const std::vector<Lin>& Calculus::varpi_row(int i) const {
  if (!bicovariant_) throw SpecIncomplete("calculus '" + t_.name + "' is not bicovariant; the adjoint coaction is undefined");
  if (W_.empty()) throw SpecIncomplete("calculus '" + t_.name + "' lacks preimages; the adjoint coaction is undefined");
  return W_[i];
}

Coact Calculus::varpi(const Word& x) const {
  Coact out;
  if (x.empty()) {
    out.emplace(std::make_pair(Word{}, Word{}), Scalar(1));
    return out;
  }
  Coact rest = varpi(tail(x));
  const auto& row = varpi_row(x[0]);
  for (int j = 0; j < dim(); ++j) {
    if (row[j].empty()) continue;
    for (const auto& [k, c] : rest) {
      Lin prod = group_->mul(row[j], Lin{{k.second, Scalar(1)}});
      Word fw = concat(Word{j}, k.first);
      for (const auto& [gw, gc] : prod) add_term(out, std::make_pair(fw, gw), c * gc);
    }
  }
  return out;
}

Coact Calculus::varpi(const Lin& x) const {
  Coact out;
  for (const auto& [w, c] : x) axpy(out, varpi(w), c);
  return out;
}

const Lin& Calculus::sigma(int a, int b) const {
  auto key = std::make_pair(a, b);
  auto it = sigma_cache_.find(key);
  if (it != sigma_cache_.end()) return it->second;
  Lin out;
  const auto& row = varpi_row(b);
  for (int j = 0; j < dim(); ++j)
    for (const auto& [w, c] : row[j])
      for (const auto& [fw, fc] : circ1(a, w)) add_term(out, Word{j, fw[0]}, c * fc);
  return sigma_cache_[key] = out;
}

Lin Calculus::sigma_at(const Lin& x, int pos) const {
  Lin out;
  for (const auto& [w, c] : x) {
    for (const auto& [sw, sc] : sigma(w[pos], w[pos + 1])) {
      Word v = w;
      v[pos] = sw[0];
      v[pos + 1] = sw[1];
      add_term(out, v, c * sc);
    }
  }
  return out;
}

Lin Calculus::ctop(int i) const {
  Lin out;
  const auto& row = varpi_row(i);
  for (int j = 0; j < dim(); ++j) axpy(out, tensor_words(unit_form(j), pi(row[j])), Scalar(1));
  return out;
}

Lin Calculus::delta(int i) const {
  Lin out;
  Sweedler s = group_->comultiply(preimage(i));
  for (const auto& [k, c] : s.terms) axpy(out, tensor_words(pi(k[0]), pi(k[1])), -c);
  return out;
}

Lin Calculus::star(const Lin& x) const {
  Lin out;
  for (const auto& [w, c] : x) {
    Lin acc{{Word{}, c.conj()}};
    for (auto g = w.rbegin(); g != w.rend(); ++g) acc = tensor_words(acc, star_[*g]);
    long k = static_cast<long>(w.size());
    axpy(out, acc, (k * (k - 1) / 2) % 2 ? Scalar(-1) : Scalar(1));
  }
  return out;
}

std::string Calculus::render_word(const Word& w) const {
  std::string s;
  for (int i : w) {
    if (!s.empty()) s += " ";
    s += t_.basis[i];
  }
  return s;
}

std::string Calculus::render(const Lin& form) const {
  return render_comb(form, [this](const Word& w) { return render_word(w); });
}

std::string Calculus::render(const Coact& x) const {
  return render_comb(x, [this](const std::pair<Word, Word>& k) {
    std::string f = k.first.empty() ? "1" : render_word(k.first);
    std::string g = k.second.empty() ? "1" : group_->render_word(k.second);
    return "(" + f + ")(x)(" + g + ")";
  });
}

AxiomReport Calculus::validate(int cap) const {
  AxiomReport rep;
  const Presentation& G = *group_;
  const int n = dim();
  auto name = [this](int i) { return t_.basis[i]; };

  for (int i = 0; i < n; ++i) {
    const Lin& a = preimage(i);
    rep.check(G.counit(a).is_zero(), "preimage in ker(eps)", name(i));
    rep.check(pi(a) == unit_form(i), "preimage maps to basis", name(i), render(pi(a)));
  }
  for (const Rule& r : G.rules()) {
    std::string rel = G.render_word(r.lhs) + " -> " + G.render(r.rhs);
    rep.check(pi(r.lhs) == pi(r.rhs), "pi respects relation", rel);
    for (int i = 0; i < n; ++i) {
      Lin rhs;
      for (const auto& [w, c] : r.rhs) axpy(rhs, circ1(i, w), c);
      rep.check(circ1(i, r.lhs) == rhs, "circ respects relation", name(i) + " o (" + rel + ")",
                render(circ1(i, r.lhs)) + " vs " + render(rhs));
    }
  }
  for (size_t k = 0; k < t_.ideal.size(); ++k) {
    const Lin& r = t_.ideal[k];
    std::string w = k < t_.ideal_text.size() ? t_.ideal_text[k] : G.render(r);
    rep.check(G.counit(r).is_zero(), "ideal generator in ker(eps)", w);
    rep.check(pi(r).empty(), "pi kills ideal generator", w, render(pi(r)));
    Coact ad = ad_defect(r);
    if (!ad.empty()) rep.notes.push_back("not right-covariant: (pi (x) id)ad(" + w + ") = " + render(ad));
  }
  if (!bicovariant_) {
    rep.check(t_.mode != "exterior", "exterior mode needs a bicovariant calculus", t_.name);
    rep.notes.push_back("calculus '" + t_.name + "' is left-covariant only; coaction checks skipped");
  }
  for (int i = 0; i < n && !star_.empty(); ++i)
    rep.check(star(star(unit_form(i))) == unit_form(i), "star involutive", name(i));

  auto mons = G.normal_monomials(cap);
  for (const Word& a : mons) {
    Lin pa = pi(a);
    Lin lhs = star(pa);
    Lin rhs = scaled(pi(G.star(G.antipode(Lin{{a, Scalar(1)}}))), Scalar(-1));
    rep.check(lhs == rhs, "pi(a)* = -pi(kappa(a)*)", G.render_word(a));
    for (const Word& b : mons) {
      Lin ab = G.normal_form(concat(a, b));
      Lin expect = circ(pa, Lin{{b, Scalar(1)}});
      axpy(expect, pi(b), G.counit(a));
      rep.check(pi(ab) == expect, "pi(ab) = pi(a) o b + eps(a) pi(b)", G.render_word(a) + " | " + G.render_word(b));
      for (int i = 0; i < n; ++i) {
        Lin direct;
        for (const auto& [w, c] : ab) axpy(direct, circ1(i, w), c);
        Lin step;
        for (const auto& [w, c] : circ1(i, a)) axpy(step, circ1(w[0], b), c);
        rep.check(direct == step, "module law", name(i) + " o " + G.render_word(a) + " o " + G.render_word(b));
      }
    }
    for (int i = 0; i < n; ++i) {
      Lin l = star(circ1(i, a));
      Lin r = circ(star(unit_form(i)), G.star(G.antipode(Lin{{a, Scalar(1)}})));
      rep.check(l == r, "(e o a)* = e* o kappa(a)*", name(i) + " o " + G.render_word(a));
    }
  }

  if (W_.empty()) return rep;
  for (int i = 0; i < n; ++i) {
    Lin back;
    for (int j = 0; j < n; ++j) axpy(back, unit_form(j), G.counit(W_[i][j]));
    rep.check(back == unit_form(i), "(id (x) eps) varpi = id", name(i));
    using Key = std::tuple<int, Word, Word>;
    Comb<Key> lhs, rhs;
    for (int j = 0; j < n; ++j)
      for (const auto& [wj, cj] : W_[i][j])
        for (int k = 0; k < n; ++k)
          for (const auto& [wk, ck] : W_[j][k]) add_term(lhs, Key{k, wk, wj}, cj * ck);
    for (int k = 0; k < n; ++k)
      for (const auto& [key, c] : G.comultiply(W_[i][k]).terms) add_term(rhs, Key{k, key[0], key[1]}, c);
    rep.check(lhs == rhs, "(varpi (x) id) varpi = (id (x) phi) varpi", name(i));
    Coact vs = varpi(star(unit_form(i)));
    Coact sv;
    for (int j = 0; j < n; ++j) {
      if (W_[i][j].empty()) continue;
      Lin gs = G.star(W_[i][j]);
      for (const auto& [fw, fc] : star(unit_form(j)))
        for (const auto& [gw, gc] : gs) add_term(sv, std::make_pair(fw, gw), fc * gc);
    }
    rep.check(vs == sv, "varpi(e*) = (* (x) *) varpi(e)", name(i));
    for (int g = 0; g < G.ngens(); ++g) {
      Coact l = varpi(circ1(i, Word{g}));
      Coact r;
      for (const auto& [key, c] : G.comultiply(Lin{{Word{g}, Scalar(1)}}, 3).terms) {
        Lin left = G.antipode(Lin{{key[0], Scalar(1)}});
        for (int j = 0; j < n; ++j) {
          if (W_[i][j].empty()) continue;
          Lin gl = G.mul(G.mul(left, W_[i][j]), Lin{{key[2], Scalar(1)}});
          for (const auto& [fw, fc] : circ1(j, key[1]))
            for (const auto& [gw, gc] : gl) add_term(r, std::make_pair(fw, gw), c * fc * gc);
        }
      }
      rep.check(l == r, "varpi(e o a) = e_k o a(2) (x) kappa(a(1)) c_k a(3)", name(i) + " o " + G.gen_name(g));
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Lin x{{Word{a, b, c}, Scalar(1)}};
        Lin l = sigma_at(sigma_at(sigma_at(x, 0), 1), 0);
        Lin r = sigma_at(sigma_at(sigma_at(x, 1), 0), 1);
        rep.check(l == r, "braid equation", render_word(Word{a, b, c}));
      }
  return rep;
}

std::shared_ptr<Calculus> load_calculus(const Json& pack, std::shared_ptr<Presentation> group, const Params& params) {
  if (!pack.contains("calculus")) throw InvalidInput("pack has no calculus section");
  const Json& c = pack.at("calculus");
  const std::string gname = c.at("group").get<std::string>();
  if (gname != group->name())
    throw DomainMismatch("calculus '" + c.at("name").get<std::string>() + "' is over " + gname + ", not " + group->name());
  Calculus::Tables t;
  t.name = c.at("name").get<std::string>();
  t.basis = c.at("basis").get<std::vector<std::string>>();
  if (c.contains("mode")) t.mode = c.at("mode").get<std::string>();
  if (t.mode != "envelope" && t.mode != "exterior") throw InvalidInput("unknown quotient mode '" + t.mode + "'");
  auto form_lookup = [&t](const std::string& s) {
    for (size_t k = 0; k < t.basis.size(); ++k)
      if (t.basis[k] == s) return static_cast<int>(k);
    return -1;
  };
  auto group_lookup = [&group](const std::string& s) { return group->gen_index(s); };
  auto form = [&](const std::string& text) {
    Lin f = subst_params(parse_free(text, form_lookup), params);
    for (const auto& [w, v] : f)
      if (w.size() != 1) throw InvalidInput("calculus '" + t.name + "': '" + text + "' is not a 1-form");
    return f;
  };
  auto gen = [&](const std::string& s) {
    int g = group->gen_index(s);
    if (g < 0) throw InvalidInput("calculus '" + t.name + "': unknown generator '" + s + "'");
    return g;
  };
  auto bas = [&](const std::string& s) {
    int i = form_lookup(s);
    if (i < 0) throw InvalidInput("calculus '" + t.name + "': unknown basis element '" + s + "'");
    return i;
  };
  const int n = static_cast<int>(t.basis.size());
  t.pi.assign(group->ngens(), Lin{});
  std::vector<bool> seen(group->ngens(), false);
  for (auto it = c.at("pi").begin(); it != c.at("pi").end(); ++it) {
    int g = gen(it.key());
    t.pi[g] = form(it.value().get<std::string>());
    seen[g] = true;
  }
  for (int g = 0; g < group->ngens(); ++g)
    if (!seen[g]) throw SpecIncomplete("calculus '" + t.name + "': no pi entry for " + group->gen_name(g));
  t.circ.assign(n, std::vector<Lin>(group->ngens()));
  for (auto it = c.at("circ").begin(); it != c.at("circ").end(); ++it) {
    int i = bas(it.key());
    std::vector<bool> have(group->ngens(), false);
    for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
      int g = gen(jt.key());
      t.circ[i][g] = form(jt.value().get<std::string>());
      have[g] = true;
    }
    for (int g = 0; g < group->ngens(); ++g)
      if (!have[g]) throw SpecIncomplete("calculus '" + t.name + "': no entry " + t.basis[i] + " o " + group->gen_name(g));
  }
  t.preimages.assign(n, Lin{});
  if (c.contains("preimages"))
    for (auto it = c.at("preimages").begin(); it != c.at("preimages").end(); ++it)
      t.preimages[bas(it.key())] = group->normalize(subst_params(parse_free(it.value().get<std::string>(), group_lookup), params));
  if (c.contains("ideal"))
    for (const Json& r : c.at("ideal")) {
      t.ideal_text.push_back(r.get<std::string>());
      t.ideal.push_back(group->normalize(subst_params(parse_free(r.get<std::string>(), group_lookup), params)));
    }
  return std::make_shared<Calculus>(std::move(group), std::move(t));
}

std::shared_ptr<Calculus> builtin_calculus(const std::string& id, const Params& params) {
  Json pack = builtin_pack(id);
  if (!pack.contains("calculus")) throw InvalidInput("pack '" + id + "' is not a calculus");
  return load_calculus(pack, builtin_group(pack.at("calculus").at("group").get<std::string>()), params);
}

}  // namespace qpb
