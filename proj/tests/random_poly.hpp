#pragma once

#include <random>

#include "tropskel/newton_puiseux.hpp"

namespace testing_util {

// Random monic f over Q[t] of degree <= 4 with coefficients of height <= 8.
class RandomPoly {
 public:
  explicit RandomPoly(unsigned seed) : rng_(seed) {}
  tropskel::SeriesPoly next() {
    std::uniform_int_distribution<int> deg(1, 4), coef(-8, 8), texp(0, 4), nterms(0, 3);
    int d = deg(rng_);
    auto Q = tropskel::Field::rationals();
    tropskel::SeriesPoly f;
    for (int i = 0; i < d; ++i) {
      tropskel::LaurentSeries s(Q);
      int m = nterms(rng_);
      for (int k = 0; k < m; ++k) s.add_term(tropskel::Rational(texp(rng_)), Q->from_int(coef(rng_)));
      f.push_back(s);
    }
    f.push_back(tropskel::LaurentSeries::constant(Q->one()));
    return f;
  }

 private:
  std::mt19937 rng_;
};

}  // namespace testing_util
