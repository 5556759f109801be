#include "qpb/expr.hpp"

#include <cctype>

#include "qpb/errors.hpp"

namespace qpb {

namespace {

Lin free_mul(const Lin& a, const Lin& b) {
  Lin out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) add_term(out, concat(wa, wb), ca * cb);
  return out;
}

bool scalar_only(const Lin& x) { return x.empty() || (x.size() == 1 && x.begin()->first.empty()); }

Scalar scalar_of(const Lin& x) { return x.empty() ? Scalar(0) : x.begin()->second; }

Lin constant(const Scalar& c) {
  Lin out;
  add_term(out, Word{}, c);
  return out;
}

class FreeParser {
 public:
  FreeParser(std::string_view s, const GenLookup& lookup) : s_(s), lookup_(lookup) {}

  Lin run() {
    Lin v = expr();
    skip();
    if (p_ != s_.size()) fail("trailing input");
    return v;
  }

 private:
  std::string_view s_;
  const GenLookup& lookup_;
  size_t p_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("cannot parse '" + std::string(s_) + "' at " + std::to_string(p_) + ": " + what);
  }

  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }

  bool operand_start(size_t at) const {
    if (at >= s_.size()) return false;
    char ch = s_[at];
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '(' || ch == '_';
  }

  Lin expr() {
    skip();
    bool neg = false;
    if (p_ < s_.size() && (s_[p_] == '+' || s_[p_] == '-')) {
      neg = s_[p_] == '-';
      ++p_;
    }
    Lin acc = term();
    if (neg) acc = scaled(acc, Scalar(-1));
    for (;;) {
      skip();
      if (p_ >= s_.size() || (s_[p_] != '+' && s_[p_] != '-')) break;
      bool minus = s_[p_] == '-';
      ++p_;
      axpy(acc, term(), Scalar(minus ? -1 : 1));
    }
    return acc;
  }

  Lin term() {
    Lin acc = power();
    for (;;) {
      skip();
      if (p_ >= s_.size()) break;
      char ch = s_[p_];
      if (ch == '*') {
        ++p_;
        acc = free_mul(acc, power());
      } else if (ch == '/') {
        ++p_;
        Lin d = power();
        if (!scalar_only(d)) fail("division by a non-scalar");
        Scalar den = scalar_of(d);
        if (den.is_zero()) fail("division by zero");
        acc = scaled(acc, den.inv());
      } else if (operand_start(p_)) {
        acc = free_mul(acc, power());
      } else {
        break;
      }
    }
    return acc;
  }

  Lin power() {
    Lin base = atom();
    skip();
    if (p_ < s_.size() && s_[p_] == '^') {
      ++p_;
      skip();
      bool neg = false;
      if (p_ < s_.size() && s_[p_] == '-') {
        neg = true;
        ++p_;
      }
      size_t start = p_;
      while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
      if (start == p_) fail("expected exponent");
      long e = std::stol(std::string(s_.substr(start, p_ - start)));
      if (scalar_only(base)) return constant(scalar_of(base).pow(neg ? -e : e));
      if (neg) fail("negative power of a non-scalar");
      Lin out = constant(Scalar(1));
      for (long k = 0; k < e; ++k) out = free_mul(out, base);
      return out;
    }
    return base;
  }

  Lin atom() {
    skip();
    if (p_ >= s_.size()) fail("unexpected end");
    char ch = s_[p_];
    if (ch == '(') {
      ++p_;
      Lin v = expr();
      skip();
      if (p_ >= s_.size() || s_[p_] != ')') fail("expected ')'");
      ++p_;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      size_t start = p_;
      while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
      return constant(Scalar::parse(s_.substr(start, p_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      size_t start = p_;
      while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_')) ++p_;
      std::string name(s_.substr(start, p_ - start));
      if (p_ < s_.size() && s_[p_] == '*' && !operand_start(p_ + 1)) {
        int g = lookup_(name + "*");
        if (g >= 0) {
          ++p_;
          Lin out;
          out.emplace(Word{g}, Scalar(1));
          return out;
        }
      }
      int g = lookup_(name);
      if (g >= 0) {
        Lin out;
        out.emplace(Word{g}, Scalar(1));
        return out;
      }
      if (name == "i" || name == "mu" || name == "lambda" || name == "t") return constant(Scalar::parse(name));
      fail("unknown name '" + name + "'");
    }
    fail(std::string("unexpected '") + ch + "'");
  }
};

}  // namespace

Lin parse_free(std::string_view text, const GenLookup& lookup) { return FreeParser(text, lookup).run(); }

}  // namespace qpb
