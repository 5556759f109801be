#pragma once

// Template definitions for grext.hpp.

namespace qpb {

template <class K>
std::vector<Comb<int>> linear_dependencies(const std::vector<Comb<K>>& vecs) {
  struct Row {
    Comb<K> v;
    Comb<int> combo;
  };
  std::map<K, Row> rows;
  std::vector<Comb<int>> out;
  for (size_t i = 0; i < vecs.size(); ++i) {
    Comb<K> v = vecs[i];
    Comb<int> combo{{static_cast<int>(i), Scalar(1)}};
    auto it = v.begin();
    while (it != v.end()) {
      auto r = rows.find(it->first);
      if (r == rows.end()) {
        ++it;
        continue;
      }
      K key = it->first;
      Scalar c = -it->second;
      axpy(v, r->second.v, c);
      axpy(combo, r->second.combo, c);
      it = v.upper_bound(key);
    }
    if (v.empty()) {
      out.push_back(combo);
      continue;
    }
    Scalar lead = v.begin()->second.inv();
    K pivot = v.begin()->first;
    rows.emplace(pivot, Row{scaled(v, lead), scaled(combo, lead)});
  }
  return out;
}

}  // namespace qpb
