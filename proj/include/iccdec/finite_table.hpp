#ifndef ICCDEC_FINITE_TABLE_HPP_
#define ICCDEC_FINITE_TABLE_HPP_

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "iccdec/error.hpp"

namespace iccdec {

// A finite group given by its Cayley table. Element 0 is the identity.
class FiniteTable {
 public:
  FiniteTable() : FiniteTable(std::vector<std::vector<int>>{{0}}) {}

  explicit FiniteTable(std::vector<std::vector<int>> table)
      : table_(std::move(table)) {
    validate();
    const int n = order();
    inverse_.assign(n, -1);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        if (table_[x][y] == 0) inverse_[x] = y;
      }
    }
  }

  static FiniteTable cyclic(int n) {
    if (n < 1) throw UsageError("cyclic table order must be >= 1");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
    return FiniteTable(std::move(t));
  }

  int order() const { return static_cast<int>(table_.size()); }
  int mul(int x, int y) const { return table_[x][y]; }
  int inv(int x) const { return inverse_[x]; }
  const std::vector<std::vector<int>>& table() const { return table_; }

  int element_order(int x) const {
    int k = 1;
    for (int y = x; y != 0; y = mul(y, x)) ++k;
    return k;
  }

  // Smallest subgroup containing `seed`, as a sorted element list.
  std::vector<int> closure(std::vector<int> seed) const {
    std::set<int> s(seed.begin(), seed.end());
    s.insert(0);
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<int> cur(s.begin(), s.end());
      for (int x : cur) {
        for (int y : cur) {
          if (s.insert(mul(x, y)).second) grew = true;
        }
      }
    }
    return {s.begin(), s.end()};
  }

  // All subgroups, each a sorted element list, ordered by size then content.
  std::vector<std::vector<int>> subgroups() const {
    std::set<std::vector<int>> found{{0}};
    std::vector<std::vector<int>> queue{{0}};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const auto current = queue[i];
      for (int g = 0; g < order(); ++g) {
        if (std::binary_search(current.begin(), current.end(), g)) continue;
        auto seed = current;
        seed.push_back(g);
        auto next = closure(std::move(seed));
        if (found.insert(next).second) queue.push_back(std::move(next));
      }
    }
    std::vector<std::vector<int>> out(found.begin(), found.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return a.size() < b.size();
    });
    return out;
  }

  // Greedy generating set: scan elements in index order, keep those not
  // already in the subgroup generated so far.
  std::vector<int> greedy_generators() const {
    std::vector<int> gens;
    std::vector<int> span{0};
    for (int g = 1; g < order(); ++g) {
      if (std::binary_search(span.begin(), span.end(), g)) continue;
      gens.push_back(g);
      span = closure(gens);
    }
    return gens;
  }

  bool operator==(const FiniteTable& o) const { return table_ == o.table_; }

 private:
  void validate() const {
    const auto n = table_.size();
    if (n == 0) throw UsageError("finite group table must be nonempty");
    for (const auto& row : table_) {
      if (row.size() != n) throw UsageError("finite group table must be square");
      std::vector<bool> seen(n, false);
      for (int v : row) {
        if (v < 0 || static_cast<std::size_t>(v) >= n || seen[v]) {
          throw UsageError("finite group table rows must be permutations");
        }
        seen[v] = true;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<bool> seen(n, false);
      for (std::size_t i = 0; i < n; ++i) {
        if (seen[table_[i][j]]) {
          throw UsageError("finite group table columns must be permutations");
        }
        seen[table_[i][j]] = true;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (table_[0][i] != static_cast<int>(i) ||
          table_[i][0] != static_cast<int>(i)) {
        throw UsageError("element 0 of a finite group table must be the identity");
      }
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) {
            throw UsageError("finite group table is not associative");
          }
  }

  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
};

}  // namespace iccdec

#endif  // ICCDEC_FINITE_TABLE_HPP_
