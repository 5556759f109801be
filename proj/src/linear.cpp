#include "qpb/linear.hpp"

namespace qpb {

namespace {
// A top-level '+' or '-' after the first character means the rendering is a sum.
bool is_sum(const std::string& s) {
  int depth = 0;
  for (size_t k = 0; k < s.size(); ++k) {
    char ch = s[k];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && k > 0 && (ch == '+' || ch == '-') && s[k - 1] != '^') return true;
  }
  return false;
}
}  // namespace

std::string coef_prefix(const Scalar& c, bool body_empty) {
  if (body_empty) return c.str();
  if (c.is_one()) return "";
  if (c == Scalar(-1)) return "-";
  std::string s = c.str();
  if (is_sum(s)) s = "(" + s + ")";
  return s + "*";
}

}  // namespace qpb
