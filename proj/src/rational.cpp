#include "setrisk/rational.hpp"

#include <cctype>
#include <iomanip>
#include <sstream>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "setrisk/error.hpp"

namespace setrisk {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) throw ParseError("not an integer: '" + std::string(s) + "'");
  std::string text(s);
  if (text.front() == '+') text.erase(0, 1);
  return Integer(text);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) throw ParseError("bad denominator in '" + std::string(text) + "'");
    Integer den(std::string{den_text});
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty()))
      throw ParseError("bad decimal '" + std::string(text) + "'");
    Integer whole = int_part.empty() ? Integer(0) : Integer(std::string(int_part));
    Integer frac = frac_part.empty() ? Integer(0) : Integer(std::string(frac_part));
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac_part.size()));
    Rational r = Rational(whole) + Rational(frac, scale);
    return negative ? Rational(-r) : r;
  }

  return Rational(parse_integer(text));
}

std::string format_rational(const Rational& value) {
  std::string num = numerator(value).str();
  Integer den = denominator(value);
  if (den == 1) return num;
  return num + "/" + den.str();
}

std::string format_decimal(const Rational& value, int digits) {
  using Dec = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<50>>;
  Dec num(numerator(value).str());
  Dec den(denominator(value).str());
  Dec q = num / den;
  std::ostringstream out;
  out << std::setprecision(digits) << q;
  return out.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Vector zero_vector(Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 0;
  return v;
}

Vector unit_vector(Eigen::Index n, Eigen::Index i) {
  Vector v = zero_vector(n);
  v[i] = 1;
  return v;
}

const Rational& ExtendedRational::value() const {
  if (kind_ != Kind::Finite) throw std::logic_error("value() on infinite ExtendedRational");
  return value_;
}

ExtendedRational operator+(const ExtendedRational& a, const ExtendedRational& b) {
  using K = ExtendedRational::Kind;
  if ((a.kind_ == K::NegInf && b.kind_ == K::PosInf) || (a.kind_ == K::PosInf && b.kind_ == K::NegInf))
    throw std::logic_error("-inf + +inf is undefined");
  if (a.kind_ == K::NegInf || b.kind_ == K::NegInf) return ExtendedRational::neg_inf();
  if (a.kind_ == K::PosInf || b.kind_ == K::PosInf) return ExtendedRational::pos_inf();
  return ExtendedRational(a.value_ + b.value_);
}

ExtendedRational operator*(const Rational& scale, const ExtendedRational& a) {
  if (scale < 0) throw std::logic_error("negative scaling of ExtendedRational");
  if (a.is_finite() || scale == 0) return a.is_finite() ? ExtendedRational(scale * a.value_) : ExtendedRational(0);
  return a;
}

bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.kind_ != b.kind_) return false;
  return a.kind_ != ExtendedRational::Kind::Finite || a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
  if (a.kind_ != ExtendedRational::Kind::Finite) return std::strong_ordering::equal;
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (b.value_ < a.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string ExtendedRational::to_string() const {
  switch (kind_) {
    case Kind::NegInf: return "-inf";
    case Kind::PosInf: return "+inf";
    case Kind::Finite: break;
  }
  return format_rational(value_);
}

ExtendedRational ExtendedRational::parse(std::string_view text) {
  if (text == "-inf") return neg_inf();
  if (text == "+inf" || text == "inf") return pos_inf();
  return ExtendedRational(parse_rational(text));
}

}  // namespace setrisk
