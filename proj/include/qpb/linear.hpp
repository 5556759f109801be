#pragma once

#include <map>
#include <string>
#include <vector>

#include "qpb/scalar.hpp"

namespace qpb {

/// A word over generator indices.  Also used for tensor words over form bases.
using Word = std::vector<int>;

/// Finite linear combination keyed by K; zero coefficients are never stored.
template <class K>
using Comb = std::map<K, Scalar>;

using Lin = Comb<Word>;

template <class K>
void add_term(Comb<K>& acc, const K& key, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = acc.find(key);
  if (it == acc.end()) {
    acc.emplace(key, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) acc.erase(it);
}

template <class K>
void axpy(Comb<K>& acc, const Comb<K>& x, const Scalar& c) {
  if (c.is_zero()) return;
  for (const auto& [k, v] : x) add_term(acc, k, v * c);
}

template <class K>
Comb<K> scaled(const Comb<K>& x, const Scalar& c) {
  Comb<K> out;
  if (c.is_zero()) return out;
  for (const auto& [k, v] : x) out.emplace(k, v * c);
  return out;
}

template <class K>
Comb<K> sum(const Comb<K>& a, const Comb<K>& b, const Scalar& cb = Scalar(1)) {
  Comb<K> out = a;
  axpy(out, b, cb);
  return out;
}

inline Word concat(const Word& a, const Word& b) {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

/// Renders a scalar as a coefficient in front of `body` ("", "-", "3*", "(1+mu)*").
std::string coef_prefix(const Scalar& c, bool body_empty);

/// Renders a sum of terms; `render_key` gives the body for each key.
template <class K, class F>
std::string render_comb(const Comb<K>& x, F render_key) {
  if (x.empty()) return "0";
  std::string out;
  for (const auto& [k, c] : x) {
    std::string body = render_key(k);
    std::string term = coef_prefix(c, body.empty()) + body;
    if (out.empty()) {
      out = term;
    } else if (!term.empty() && term[0] == '-') {
      out += term;
    } else {
      out += "+" + term;
    }
  }
  return out;
}

}  // namespace qpb
