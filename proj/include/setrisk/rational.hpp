#ifndef SETRISK_RATIONAL_HPP
#define SETRISK_RATIONAL_HPP

#include <compare>
#include <string>
#include <string_view>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Dense>

namespace setrisk {

/// Exact rational scalar. Expression templates are disabled so values compose
/// cleanly inside Eigen expressions.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<Rational>;
using Matrix = MatrixX<Rational>;

/// Parses "p/q", "p" or a finite decimal such as "-0.25". Throws ParseError.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p/q" in lowest terms, or "p" when q == 1.
std::string format_rational(const Rational& value);

/// Decimal rendering with `digits` significant digits (plot output only).
std::string format_decimal(const Rational& value, int digits = 12);

double to_double(const Rational& value);

Vector zero_vector(Eigen::Index n);
Vector unit_vector(Eigen::Index n, Eigen::Index i);

/// Three-way lexicographic comparison of equally sized vectors.
template <typename Scalar>
std::strong_ordering lex_compare(const VectorX<Scalar>& a, const VectorX<Scalar>& b) {
  const Eigen::Index n = std::min(a.size(), b.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a[i] < b[i]) return std::strong_ordering::less;
    if (b[i] < a[i]) return std::strong_ordering::greater;
  }
  return a.size() <=> b.size();
}

/// Rational extended by -inf and +inf. Used for support values and penalty
/// offsets; infinities are tags, never sentinel numbers.
class ExtendedRational {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  ExtendedRational() = default;
  ExtendedRational(Rational value) : kind_(Kind::Finite), value_(std::move(value)) {}  // NOLINT
  ExtendedRational(int value) : kind_(Kind::Finite), value_(value) {}                   // NOLINT

  static ExtendedRational neg_inf() { return ExtendedRational(Kind::NegInf); }
  static ExtendedRational pos_inf() { return ExtendedRational(Kind::PosInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  /// Throws std::logic_error when not finite.
  const Rational& value() const;

  /// -inf absorbs; mixing -inf and +inf is a logic error.
  friend ExtendedRational operator+(const ExtendedRational& a, const ExtendedRational& b);
  friend ExtendedRational operator*(const Rational& scale, const ExtendedRational& a);
  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b);
  friend std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b);

  /// "-inf", "+inf" or the rational text.
  std::string to_string() const;
  static ExtendedRational parse(std::string_view text);

 private:
  explicit ExtendedRational(Kind kind) : kind_(kind) {}
  Kind kind_ = Kind::Finite;
  Rational value_{0};
};

}  // namespace setrisk

#endif  // SETRISK_RATIONAL_HPP
