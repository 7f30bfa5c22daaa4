#include "setrisk/linalg.hpp"

#include <boost/multiprecision/integer.hpp>

namespace setrisk {

Rational ScalarTraits<Rational>::make_primitive(Vector& v) {
  Integer den_lcm = 1;
  Integer num_gcd = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    den_lcm = boost::multiprecision::lcm(den_lcm, denominator(v[i]));
    num_gcd = boost::multiprecision::gcd(num_gcd, boost::multiprecision::abs(numerator(v[i])));
  }
  if (num_gcd == 0) return Rational(1);
  Rational factor(den_lcm, num_gcd);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] *= factor;
  return factor;
}

}  // namespace setrisk
