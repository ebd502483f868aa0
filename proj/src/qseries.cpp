#include "cuspfield/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cuspfield/error.hpp"
#include "zseries.hpp"

namespace cuspfield {

QExpansion::QExpansion(i64 width, i64 prec, i64 modulus) : width_(width), modulus_(modulus) {
  require(width >= 1, ErrorCode::InvalidArgument, "series width must be positive");
  require(prec >= 0, ErrorCode::InvalidArgument, "series precision must be nonnegative");
  coeffs_.assign(static_cast<std::size_t>(prec), CycNumber::zero(modulus));
}

QExpansion::QExpansion(i64 width, std::vector<CycNumber> coeffs, i64 modulus)
    : width_(width), modulus_(lcm(modulus, common_modulus(coeffs))), coeffs_(std::move(coeffs)) {
  require(width >= 1, ErrorCode::InvalidArgument, "series width must be positive");
  for (auto& c : coeffs_)
    if (c.modulus() != modulus_) c = c.embed(modulus_);
}

QExpansion QExpansion::constant(const CycNumber& c, i64 width, i64 prec) {
  QExpansion f(width, prec, c.modulus());
  if (prec > 0) f.coeffs_[0] = c;
  return f;
}

void QExpansion::set_coeff(i64 n, const CycNumber& v) {
  require(n >= 0 && n < prec(), ErrorCode::InvalidArgument, "set_coeff: index out of range");
  if (modulus_ % v.modulus() != 0) {
    *this = embed(lcm(modulus_, v.modulus()));
  }
  coeffs_[n] = v.embed(modulus_);
}

bool QExpansion::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const CycNumber& c) { return c.is_zero(); });
}

QExpansion& QExpansion::operator+=(const QExpansion& o) {
  require(width_ == o.width_, ErrorCode::InvalidArgument, "series width mismatch");
  i64 m = lcm(modulus_, o.modulus_);
  if (m != modulus_) *this = embed(m);
  const QExpansion& b = o.modulus_ == m ? o : o.embed(m);
  if (b.prec() < prec()) coeffs_.resize(static_cast<std::size_t>(b.prec()));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += b.coeffs_[i];
  return *this;
}

QExpansion& QExpansion::operator-=(const QExpansion& o) {
  QExpansion neg = o;
  neg *= CycNumber::from_int(-1);
  return *this += neg;
}

QExpansion& QExpansion::operator*=(const CycNumber& c) {
  i64 m = lcm(modulus_, c.modulus());
  if (m != modulus_) *this = embed(m);
  CycNumber s = c.embed(m);
  if (s.is_rational()) {
    mpq_class r = s.to_rational();
    for (auto& x : coeffs_) x *= r;
  } else {
    for (auto& x : coeffs_) x *= s;
  }
  return *this;
}

QExpansion operator*(const QExpansion& a, const QExpansion& b) {
  require(a.width_ == b.width_, ErrorCode::InvalidArgument, "series width mismatch");
  i64 p = std::min(a.prec(), b.prec());
  i64 m = lcm(a.modulus_, b.modulus_);
  ZSeries za = ZSeries::from_qexpansion(a).embed(m);
  ZSeries zb = ZSeries::from_qexpansion(b).embed(m);
  return zs_mul(za, zb, p).to_qexpansion();
}

bool operator==(const QExpansion& a, const QExpansion& b) {
  if (a.width_ != b.width_ || a.prec() != b.prec()) return false;
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    if (!(a.coeffs_[i] == b.coeffs_[i])) return false;
  return true;
}

QExpansion QExpansion::truncate(i64 p) const {
  require(p >= 0 && p <= prec(), ErrorCode::InvalidArgument, "truncate: precision exceeds series precision");
  QExpansion r = *this;
  r.coeffs_.resize(static_cast<std::size_t>(p));
  return r;
}

QExpansion QExpansion::embed(i64 m) const {
  if (m == modulus_) return *this;
  QExpansion r(width_, 0, m);
  r.coeffs_.reserve(coeffs_.size());
  for (const auto& c : coeffs_) r.coeffs_.push_back(c.embed(m));
  return r;
}

QExpansion QExpansion::rescale_width(i64 new_width) const {
  require(new_width > 0 && new_width % width_ == 0, ErrorCode::InvalidArgument,
          "rescale_width: new width must be a multiple of the current width");
  const i64 r = new_width / width_;
  QExpansion out(new_width, prec() * r, modulus_);
  for (i64 n = 0; n < prec(); ++n) out.coeffs_[n * r] = coeffs_[n];
  return out;
}

QExpansion QExpansion::reduce_width(i64 new_width) const {
  require(new_width > 0 && width_ % new_width == 0, ErrorCode::InvalidArgument,
          "reduce_width: new width must divide the current width");
  const i64 r = width_ / new_width;
  for (i64 n = 0; n < prec(); ++n)
    if (n % r != 0 && !coeffs_[n].is_zero())
      fail(ErrorCode::Domain, "reduce_width: exponent " + std::to_string(n) + "/" + std::to_string(width_) +
                                  " is not a multiple of 1/" + std::to_string(new_width));
  QExpansion out(new_width, (prec() + r - 1) / r, modulus_);
  for (i64 n = 0; n < out.prec(); ++n) out.coeffs_[n] = coeffs_[n * r];
  return out;
}

QExpansion QExpansion::apply_galois(i64 lambda) const {
  QExpansion r = *this;
  for (auto& c : r.coeffs_) c = c.galois(lambda);
  return r;
}

QExpansion QExpansion::apply_T_power(i64 u) const {
  if (mod(u, width_) == 0) return *this;
  i64 m = lcm(modulus_, width_);
  QExpansion r = embed(m);
  for (i64 n = 0; n < prec(); ++n) {
    if (r.coeffs_[n].is_zero()) continue;
    r.coeffs_[n] *= CycNumber::zeta(width_, mod(n * u, width_)).embed(m);
  }
  return r;
}

QExpansion::NumericValue QExpansion::eval_numeric(std::complex<double> tau, i64 terms) const {
  require(tau.imag() > 0, ErrorCode::Domain, "eval_numeric: tau must lie in the upper half plane");
  require(terms >= 0 && terms <= prec(), ErrorCode::InvalidArgument,
          "eval_numeric: requested terms exceed the series precision");
  const std::complex<double> step =
      std::exp(std::complex<double>(0, 2 * std::numbers::pi) * tau / static_cast<double>(width_));
  std::complex<double> qn = 1, sum = 0;
  double recent = 0;
  for (i64 n = 0; n < terms; ++n) {
    if (!coeffs_[n].is_zero()) {
      auto v = coeffs_[n].to_complex();
      sum += v * qn;
      if (n + 16 >= terms) recent = std::max(recent, std::abs(v));
    }
    qn *= step;
  }
  const double r = std::abs(step);
  double tail = r < 1 ? (recent + 1) * std::pow(r, static_cast<double>(terms)) / (1 - r) : INFINITY;
  return {sum, tail};
}

std::string QExpansion::to_string() const {
  std::ostringstream out;
  out << "w=" << width_ << " prec=" << prec() << " M=" << modulus_ << '\n';
  for (const auto& c : coeffs_) out << c.to_string() << '\n';
  return out.str();
}

QExpansion QExpansion::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header;
  if (!std::getline(in, header)) fail(ErrorCode::Parse, "series: missing header");
  i64 w = 0, p = 0, m = 0;
  char tail = 0;
  if (std::sscanf(header.c_str(), "w=%ld prec=%ld M=%ld %c", &w, &p, &m, &tail) != 3)
    fail(ErrorCode::Parse, "series: malformed header '" + header + "'");
  if (w < 1 || p < 0 || m < 1) fail(ErrorCode::Parse, "series: invalid header values");
  std::vector<CycNumber> coeffs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    CycNumber c = CycNumber::parse(line);
    if (m % c.modulus() != 0) fail(ErrorCode::Parse, "series: coefficient modulus does not divide M");
    coeffs.push_back(c.embed(m));
  }
  if (static_cast<i64>(coeffs.size()) != p)
    fail(ErrorCode::Parse, "series: expected " + std::to_string(p) + " coefficients, found " +
                               std::to_string(coeffs.size()));
  QExpansion f(w, p, m);
  f.coeffs_ = std::move(coeffs);
  return f;
}

ScaledExpansion apply_upper_triangular(const QExpansion& f, i64 a, i64 b, i64 d, int k) {
  require(a > 0 && d > 0, ErrorCode::InvalidArgument, "apply_upper_triangular: a and d must be positive");
  require(k >= 0, ErrorCode::InvalidArgument, "apply_upper_triangular: weight must be nonnegative");
  const i64 w = f.width() * d;
  const bool twist = mod(b, w) != 0;
  const i64 m = twist ? lcm(f.modulus(), w) : f.modulus();

  // (ad)^(k/2) d^(-k) = rational * sqrt(radical)
  const i64 det = a * d;
  auto split = split_square(det);
  mpz_class numer = 1, denom = 1;
  for (int i = 0; i < k / 2; ++i) numer *= det;
  for (int i = 0; i < k; ++i) denom *= d;
  i64 radical = 1;
  if (k % 2 == 1) {
    numer *= split.square_root;
    radical = split.squarefree;
  }
  mpq_class scale(numer, denom);
  scale.canonicalize();

  QExpansion out(w, f.prec() * a, m);
  for (i64 n = 0; n < f.prec(); ++n) {
    const CycNumber& c = f.coeff(n);
    if (c.is_zero()) continue;
    CycNumber v = c.embed(m) * scale;
    if (twist) v *= CycNumber::zeta(w, mod(n * b, w)).embed(m);
    out.set_coeff(n * a, v);
  }
  return {out, radical};
}

}  // namespace cuspfield
