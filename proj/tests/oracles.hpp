#ifndef ICCDEC_TESTS_ORACLES_HPP_
#define ICCDEC_TESTS_ORACLES_HPP_

// Independent models used as oracles: faithful matrix representations of the
// groups built by the library, evaluated letter by letter on words.

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "iccdec/words.hpp"

namespace oracle {

using Q = boost::rational<std::int64_t>;

template <class T>
struct M2 {
  std::array<T, 4> e{T(1), T(0), T(0), T(1)};

  friend M2 operator*(const M2& x, const M2& y) {
    return {{x.e[0] * y.e[0] + x.e[1] * y.e[2], x.e[0] * y.e[1] + x.e[1] * y.e[3],
             x.e[2] * y.e[0] + x.e[3] * y.e[2], x.e[2] * y.e[1] + x.e[3] * y.e[3]}};
  }
  friend bool operator<(const M2& x, const M2& y) { return x.e < y.e; }
  friend bool operator==(const M2& x, const M2& y) { return x.e == y.e; }
};

using IM = M2<std::int64_t>;
using QM = M2<Q>;

inline IM inverse_unimodular(const IM& m) {
  const std::int64_t det = m.e[0] * m.e[3] - m.e[1] * m.e[2];
  return {{det * m.e[3], -det * m.e[1], -det * m.e[2], det * m.e[0]}};
}

inline QM inverse(const QM& m) {
  const Q det = m.e[0] * m.e[3] - m.e[1] * m.e[2];
  return {{m.e[3] / det, -m.e[1] / det, -m.e[2] / det, m.e[0] / det}};
}

// PSL(2,Z) elements up to sign: the representative with a positive first
// nonzero entry.
inline IM psl_normalize(IM m) {
  for (auto v : m.e) {
    if (v != 0) {
      if (v < 0) {
        for (auto& x : m.e) x = -x;
      }
      break;
    }
  }
  return m;
}

template <class Mat, class Inv>
Mat evaluate(const iccdec::Word& w, const std::map<std::string, Mat>& gens, Inv inv) {
  Mat r;
  for (const auto& l : w) {
    const Mat& g = gens.at(l.generator);
    r = r * (l.inverse ? inv(g) : g);
  }
  return r;
}

// Z/2 * Z/3 = PSL(2,Z): a = S, b = ST.
inline std::map<std::string, IM> modular_generators() {
  return {{"a", IM{{0, -1, 1, 0}}}, {"b", IM{{0, -1, 1, 1}}}};
}

inline IM modular_eval(const iccdec::Word& w) {
  return psl_normalize(evaluate(w, modular_generators(), inverse_unimodular));
}

// Z/4 *_{Z/2} Z/6 = SL(2,Z): a^2 = b^3 = -I.
inline std::map<std::string, IM> sl2z_generators() {
  return {{"a", IM{{0, -1, 1, 0}}}, {"b", IM{{1, -1, 1, 0}}}};
}

// Z/2 * Z/2 acting on Z: a(x) = -x, b(x) = 1 - x, as affine matrices.
inline std::map<std::string, IM> dihedral_generators() {
  return {{"a", IM{{-1, 0, 0, 1}}}, {"b", IM{{-1, 1, 0, 1}}}};
}

// BS(1,2) = <a, t | t a t^-1 = a^2> acting on Z[1/2].
inline std::map<std::string, QM> bs12_generators() {
  return {{"a", QM{{Q(1), Q(1), Q(0), Q(1)}}}, {"t", QM{{Q(2), Q(0), Q(0), Q(1)}}}};
}

// Z^2 x|_phi Z as affine maps x -> phi^m x + v, kept with the exponent m.
struct Affine2 {
  IM phi_m;
  std::array<std::int64_t, 2> v{0, 0};
  std::int64_t m = 0;

  friend Affine2 operator*(const Affine2& x, const Affine2& y) {
    Affine2 r;
    r.phi_m = x.phi_m * y.phi_m;
    r.v = {x.v[0] + x.phi_m.e[0] * y.v[0] + x.phi_m.e[1] * y.v[1],
           x.v[1] + x.phi_m.e[2] * y.v[0] + x.phi_m.e[3] * y.v[1]};
    r.m = x.m + y.m;
    return r;
  }
  friend bool operator==(const Affine2& x, const Affine2& y) {
    return x.phi_m == y.phi_m && x.v == y.v && x.m == y.m;
  }
};

inline Affine2 affine_inverse(const Affine2& a) {
  Affine2 r;
  r.phi_m = inverse_unimodular(a.phi_m);
  r.v = {-(r.phi_m.e[0] * a.v[0] + r.phi_m.e[1] * a.v[1]),
         -(r.phi_m.e[2] * a.v[0] + r.phi_m.e[3] * a.v[1])};
  r.m = -a.m;
  return r;
}

inline std::map<std::string, Affine2> semidirect_generators(const IM& phi) {
  return {{"e1", Affine2{IM{}, {1, 0}, 0}},
          {"e2", Affine2{IM{}, {0, 1}, 0}},
          {"t", Affine2{phi, {0, 0}, 1}}};
}

// Free reduction over letters; the classic free-group normal form.
inline iccdec::Word free_reduce(const iccdec::Word& w) {
  iccdec::Word out;
  for (const auto& l : w) {
    if (!out.empty() && out.back().generator == l.generator && out.back().inverse != l.inverse) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

inline iccdec::Word random_word(std::mt19937_64& rng, const std::vector<std::string>& names,
                                int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
  std::bernoulli_distribution inv(0.5);
  iccdec::Word w;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) w.push_back({names[pick(rng)], inv(rng)});
  return w;
}

}  // namespace oracle

#endif  // ICCDEC_TESTS_ORACLES_HPP_
