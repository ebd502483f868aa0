#include "cuspfield/cyclotomic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include "cuspfield/error.hpp"
#include "qlinalg.hpp"

namespace cuspfield {

namespace {

// Exact quotient of a by the monic polynomial b (ascending coefficients).
std::vector<i64> divide_monic(std::vector<i64> a, const std::vector<i64>& b) {
  const std::size_t db = b.size() - 1;
  std::vector<i64> q(a.size() - db, 0);
  for (std::size_t i = a.size(); i-- > db;) {
    i64 c = a[i];
    if (c == 0) continue;
    q[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  for (std::size_t i = 0; i < db; ++i)
    if (a[i] != 0) fail(ErrorCode::Internal, "cyclotomic polynomial division not exact");
  return q;
}

std::unique_ptr<CycloData> build_cyclo(i64 m) {
  auto data = std::make_unique<CycloData>();
  data->modulus = m;
  std::vector<i64> poly(m + 1, 0);
  poly[0] = -1;
  poly[m] = 1;
  for (i64 d : divisors(m)) {
    if (d == m) continue;
    poly = divide_monic(poly, cyclo_data(d).poly);
  }
  data->poly = poly;
  data->degree = static_cast<i64>(poly.size()) - 1;
  const i64 phi = data->degree;

  data->zeta_pow.assign(m, std::vector<i64>(phi, 0));
  std::vector<i64> cur(phi, 0);
  if (phi > 0) cur[0] = 1;
  for (i64 j = 0; j < m; ++j) {
    data->zeta_pow[j] = cur;
    // multiply by t and reduce by the monic poly
    i64 top = phi > 0 ? cur[phi - 1] : 0;
    for (i64 i = phi - 1; i > 0; --i) cur[i] = cur[i - 1];
    if (phi > 0) cur[0] = 0;
    for (i64 i = 0; i < phi; ++i) cur[i] -= top * poly[i];
  }
  return data;
}

struct CycloCache {
  std::shared_mutex mutex;
  std::unordered_map<i64, std::unique_ptr<CycloData>> table;
};

CycloCache& cache() {
  static CycloCache c;
  return c;
}

}  // namespace

const CycloData& cyclo_data(i64 modulus) {
  require(modulus >= 1, ErrorCode::InvalidArgument, "cyclotomic modulus must be positive");
  auto& c = cache();
  {
    std::shared_lock lock(c.mutex);
    auto it = c.table.find(modulus);
    if (it != c.table.end()) return *it->second;
  }
  auto built = build_cyclo(modulus);  // recursion takes its own locks
  std::unique_lock lock(c.mutex);
  auto [it, inserted] = c.table.try_emplace(modulus, std::move(built));
  return *it->second;
}

// ---------------------------------------------------------------------------
// CycNumber

CycNumber::CycNumber() : modulus_(1), coords_(1) {}

CycNumber::CycNumber(i64 modulus, std::vector<mpq_class> coords)
    : modulus_(modulus), coords_(std::move(coords)) {
  require(static_cast<i64>(coords_.size()) == cyclo_data(modulus).degree,
          ErrorCode::InvalidArgument, "CycNumber: coordinate count must equal phi(M)");
  for (auto& c : coords_) c.canonicalize();
}

CycNumber CycNumber::zero(i64 modulus) {
  return CycNumber(modulus, std::vector<mpq_class>(cyclo_data(modulus).degree));
}

CycNumber CycNumber::one(i64 modulus) { return rational(1, modulus); }

CycNumber CycNumber::rational(const mpq_class& q, i64 modulus) {
  auto z = zero(modulus);
  z.coords_[0] = q;
  z.coords_[0].canonicalize();
  return z;
}

CycNumber CycNumber::zeta(i64 modulus, i64 j) {
  const auto& d = cyclo_data(modulus);
  const auto& row = d.zeta_pow[mod(j, modulus)];
  std::vector<mpq_class> c(row.begin(), row.end());
  return CycNumber(modulus, std::move(c));
}

bool CycNumber::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const mpq_class& q) { return sgn(q) == 0; });
}

bool CycNumber::is_rational() const {
  return std::all_of(coords_.begin() + 1, coords_.end(), [](const mpq_class& q) { return sgn(q) == 0; });
}

mpq_class CycNumber::to_rational() const {
  require(is_rational(), ErrorCode::Domain, "CycNumber is not rational");
  return coords_[0];
}

void unify(CycNumber& a, CycNumber& b) {
  if (a.modulus() == b.modulus()) return;
  i64 l = lcm(a.modulus(), b.modulus());
  a = a.embed(l);
  b = b.embed(l);
}

i64 common_modulus(std::span<const CycNumber> values) {
  i64 m = 1;
  for (const auto& v : values) m = lcm(m, v.modulus());
  return m;
}

CycNumber CycNumber::operator-() const {
  CycNumber r = *this;
  for (auto& c : r.coords_) c = -c;
  return r;
}

CycNumber& CycNumber::operator+=(const CycNumber& o) {
  if (o.modulus_ != modulus_) {
    CycNumber b = o;
    unify(*this, b);
    return *this += b;
  }
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

CycNumber& CycNumber::operator-=(const CycNumber& o) { return *this += -o; }

CycNumber& CycNumber::operator*=(const mpq_class& q) {
  for (auto& c : coords_) c *= q;
  return *this;
}

CycNumber& CycNumber::operator*=(const CycNumber& o) {
  if (o.modulus_ != modulus_) {
    CycNumber b = o;
    unify(*this, b);
    return *this *= b;
  }
  const auto& d = cyclo_data(modulus_);
  const std::size_t phi = coords_.size();
  std::vector<mpq_class> prod(2 * phi - 1);
  for (std::size_t i = 0; i < phi; ++i) {
    if (sgn(coords_[i]) == 0) continue;
    for (std::size_t j = 0; j < phi; ++j) {
      if (sgn(o.coords_[j]) == 0) continue;
      prod[i + j] += coords_[i] * o.coords_[j];
    }
  }
  for (std::size_t i = 0; i < phi; ++i) coords_[i] = prod[i];
  for (std::size_t j = phi; j < prod.size(); ++j) {
    if (sgn(prod[j]) == 0) continue;
    const auto& row = d.zeta_pow[j % modulus_];
    for (std::size_t i = 0; i < phi; ++i)
      if (row[i] != 0) coords_[i] += prod[j] * row[i];
  }
  return *this;
}

CycNumber CycNumber::inv() const {
  require(!is_zero(), ErrorCode::Domain, "division by zero in cyclotomic field");
  const std::size_t phi = coords_.size();
  // Columns: coordinates of x * zeta^i.
  QMatrix mat(phi, std::vector<mpq_class>(phi));
  for (std::size_t i = 0; i < phi; ++i) {
    CycNumber col = *this * zeta(modulus_, static_cast<i64>(i));
    for (std::size_t r = 0; r < phi; ++r) mat[r][i] = col.coords_[r];
  }
  std::vector<mpq_class> rhs(phi);
  rhs[0] = 1;
  auto sol = solve_exact(mat, rhs);
  if (!sol) fail(ErrorCode::Internal, "cyclotomic inverse: singular multiplication matrix");
  return CycNumber(modulus_, std::move(*sol));
}

CycNumber& CycNumber::operator/=(const CycNumber& o) { return *this *= o.inv(); }

bool operator==(const CycNumber& a, const CycNumber& b) {
  if (a.modulus_ == b.modulus_) return a.coords_ == b.coords_;
  CycNumber x = a, y = b;
  unify(x, y);
  return x.coords_ == y.coords_;
}

CycNumber CycNumber::embed(i64 target) const {
  require(target > 0 && target % modulus_ == 0, ErrorCode::InvalidArgument,
          "embed: target modulus " + std::to_string(target) + " is not a multiple of " +
              std::to_string(modulus_));
  if (target == modulus_) return *this;
  const auto& d = cyclo_data(target);
  const i64 step = target / modulus_;
  std::vector<mpq_class> out(d.degree);
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (sgn(coords_[i]) == 0) continue;
    const auto& row = d.zeta_pow[(static_cast<i64>(i) * step) % target];
    for (i64 r = 0; r < d.degree; ++r)
      if (row[r] != 0) out[r] += coords_[i] * row[r];
  }
  return CycNumber(target, std::move(out));
}

CycNumber CycNumber::descend(i64 target) const {
  require(target > 0 && modulus_ % target == 0, ErrorCode::InvalidArgument,
          "descend: target modulus must divide the current modulus");
  if (target == modulus_) return *this;
  const auto& small = cyclo_data(target);
  const std::size_t rows = coords_.size();
  const std::size_t cols = static_cast<std::size_t>(small.degree);
  QMatrix mat(rows, std::vector<mpq_class>(cols));
  for (std::size_t j = 0; j < cols; ++j) {
    CycNumber basis = zeta(target, static_cast<i64>(j)).embed(modulus_);
    for (std::size_t r = 0; r < rows; ++r) mat[r][j] = basis.coords_[r];
  }
  auto sol = solve_exact(mat, coords_);
  if (!sol)
    fail(ErrorCode::Domain, "descend: element does not lie in Q(zeta_" + std::to_string(target) + ")");
  return CycNumber(target, std::move(*sol));
}

CycNumber CycNumber::minimal() const {
  const CycNumber* self = this;
  auto f = field_of(std::span<const CycNumber>(self, 1), modulus_);
  return descend(f.conductor());
}

CycNumber CycNumber::galois(i64 lambda) const {
  require(gcd(lambda, modulus_) == 1, ErrorCode::Domain,
          "galois: " + std::to_string(lambda) + " is not coprime to " + std::to_string(modulus_));
  if (mod(lambda, modulus_) == 1 % modulus_) return *this;
  const auto& d = cyclo_data(modulus_);
  std::vector<mpq_class> out(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (sgn(coords_[i]) == 0) continue;
    const auto& row = d.zeta_pow[mod(static_cast<i64>(i) * lambda, modulus_)];
    for (std::size_t r = 0; r < out.size(); ++r)
      if (row[r] != 0) out[r] += coords_[i] * row[r];
  }
  return CycNumber(modulus_, std::move(out));
}

std::complex<double> CycNumber::to_complex() const {
  std::complex<double> z = 0;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (sgn(coords_[i]) == 0) continue;
    double ang = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(modulus_);
    z += coords_[i].get_d() * std::polar(1.0, ang);
  }
  return z;
}

std::string CycNumber::to_string() const {
  std::string out = std::to_string(modulus_) + ":[";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ',';
    out += coords_[i].get_str();
  }
  out += ']';
  return out;
}

CycNumber CycNumber::parse(std::string_view text) {
  auto bad = [&](const std::string& why) -> CycNumber {
    fail(ErrorCode::Parse, "cyclotomic value '" + std::string(text) + "': " + why);
  };
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  auto colon = s.find(':');
  if (colon == std::string::npos || colon == 0) return bad("missing modulus");
  if (s.size() < colon + 3 || s[colon + 1] != '[' || s.back() != ']') return bad("expected M:[...]");
  i64 m = 0;
  try {
    std::size_t used = 0;
    m = std::stoll(s.substr(0, colon), &used);
    if (used != colon) return bad("bad modulus");
  } catch (const std::exception&) {
    return bad("bad modulus");
  }
  if (m < 1) return bad("modulus must be positive");
  std::vector<mpq_class> coords;
  std::string body = s.substr(colon + 2, s.size() - colon - 3);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    auto comma = body.find(',', pos);
    std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (tok.empty()) return bad("empty coordinate");
    if (tok.find_first_not_of("0123456789-/") != std::string::npos) return bad("bad rational " + tok);
    mpq_class q;
    if (q.set_str(tok, 10) != 0) return bad("bad rational " + tok);
    if (q.get_den() == 0) return bad("zero denominator");
    q.canonicalize();
    coords.push_back(q);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (static_cast<i64>(coords.size()) != cyclo_data(m).degree) return bad("coordinate count must be phi(M)");
  return CycNumber(m, std::move(coords));
}

// ---------------------------------------------------------------------------
// UnitSubgroup

namespace {

std::vector<i64> greedy_generators(i64 modulus, const std::vector<i64>& elements) {
  std::vector<i64> gens;
  std::set<i64> closure{1 % modulus};
  for (i64 x : elements) {
    if (closure.count(x)) continue;
    gens.push_back(x);
    std::vector<i64> frontier(closure.begin(), closure.end());
    while (!frontier.empty()) {
      std::vector<i64> next;
      for (i64 y : frontier)
        for (i64 g : gens) {
          i64 z = mod(y * g, modulus);
          if (closure.insert(z).second) next.push_back(z);
        }
      frontier.swap(next);
    }
  }
  return gens;
}

}  // namespace

UnitSubgroup UnitSubgroup::generated(i64 modulus, std::vector<i64> gens) {
  require(modulus >= 1, ErrorCode::InvalidArgument, "subgroup modulus must be positive");
  UnitSubgroup h;
  h.elements_.clear();
  h.modulus_ = modulus;
  std::set<i64> closure{1 % modulus};
  for (auto& g : gens) {
    g = mod(g, modulus);
    require(gcd(g, modulus) == 1, ErrorCode::InvalidArgument,
            "subgroup generator " + std::to_string(g) + " is not a unit mod " + std::to_string(modulus));
  }
  std::vector<i64> frontier{1 % modulus};
  while (!frontier.empty()) {
    std::vector<i64> next;
    for (i64 y : frontier)
      for (i64 g : gens) {
        i64 z = mod(y * g, modulus);
        if (closure.insert(z).second) next.push_back(z);
      }
    frontier.swap(next);
  }
  h.elements_.assign(closure.begin(), closure.end());
  h.gens_ = greedy_generators(modulus, h.elements_);
  return h;
}

UnitSubgroup UnitSubgroup::full(i64 modulus) {
  UnitSubgroup h;
  h.elements_.clear();
  h.modulus_ = modulus;
  h.elements_ = units(modulus);
  h.gens_ = greedy_generators(modulus, h.elements_);
  return h;
}

UnitSubgroup UnitSubgroup::reduction_kernel(i64 modulus, i64 d) {
  require(d > 0 && modulus % d == 0, ErrorCode::InvalidArgument, "reduction_kernel: d must divide M");
  UnitSubgroup h;
  h.elements_.clear();
  h.modulus_ = modulus;
  for (i64 x : units(modulus))
    if (mod(x, d) == 1 % d) h.elements_.push_back(x);
  h.gens_ = greedy_generators(modulus, h.elements_);
  return h;
}

bool UnitSubgroup::contains(i64 x) const {
  return std::binary_search(elements_.begin(), elements_.end(), mod(x, modulus_));
}

bool UnitSubgroup::is_subgroup_of(const UnitSubgroup& other) const {
  require(modulus_ == other.modulus_, ErrorCode::InvalidArgument, "subgroup moduli differ");
  return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(), elements_.end());
}

UnitSubgroup UnitSubgroup::lift(i64 target) const {
  require(target % modulus_ == 0, ErrorCode::InvalidArgument, "lift: target must be a multiple");
  if (target == modulus_) return *this;
  UnitSubgroup h;
  h.elements_.clear();
  h.modulus_ = target;
  for (i64 x : units(target))
    if (contains(x)) h.elements_.push_back(x);
  h.gens_ = greedy_generators(target, h.elements_);
  return h;
}

UnitSubgroup UnitSubgroup::project(i64 d) const {
  require(d > 0 && modulus_ % d == 0, ErrorCode::InvalidArgument, "project: d must divide M");
  std::set<i64> img;
  for (i64 x : elements_) img.insert(mod(x, d));
  UnitSubgroup h;
  h.elements_.clear();
  h.modulus_ = d;
  h.elements_.assign(img.begin(), img.end());
  h.gens_ = greedy_generators(d, h.elements_);
  return h;
}

UnitSubgroup UnitSubgroup::intersect(const UnitSubgroup& other) const {
  require(modulus_ == other.modulus_, ErrorCode::InvalidArgument, "subgroup moduli differ");
  UnitSubgroup h;
  h.elements_.clear();
  h.modulus_ = modulus_;
  std::set_intersection(elements_.begin(), elements_.end(), other.elements_.begin(), other.elements_.end(),
                        std::back_inserter(h.elements_));
  h.gens_ = greedy_generators(modulus_, h.elements_);
  return h;
}

UnitSubgroup UnitSubgroup::join(const UnitSubgroup& other) const {
  require(modulus_ == other.modulus_, ErrorCode::InvalidArgument, "subgroup moduli differ");
  std::vector<i64> gens = gens_;
  gens.insert(gens.end(), other.gens_.begin(), other.gens_.end());
  return generated(modulus_, gens);
}

// ---------------------------------------------------------------------------
// AbelianFieldDescriptor

AbelianFieldDescriptor::AbelianFieldDescriptor(i64 modulus, UnitSubgroup stabilizer)
    : modulus_(modulus), stabilizer_(std::move(stabilizer)) {
  require(stabilizer_.modulus() == modulus_, ErrorCode::InvalidArgument,
          "field descriptor: stabilizer modulus mismatch");
}

AbelianFieldDescriptor AbelianFieldDescriptor::rational() {
  return AbelianFieldDescriptor(1, UnitSubgroup::trivial(1));
}

AbelianFieldDescriptor AbelianFieldDescriptor::cyclotomic(i64 m) {
  return AbelianFieldDescriptor(m, UnitSubgroup::trivial(m));
}

i64 AbelianFieldDescriptor::degree() const {
  return euler_phi(modulus_) / static_cast<i64>(stabilizer_.order());
}

UnitSubgroup AbelianFieldDescriptor::stabilizer_at(i64 target) const { return stabilizer_.lift(target); }

i64 AbelianFieldDescriptor::conductor() const {
  for (i64 d : divisors(modulus_))
    if (UnitSubgroup::reduction_kernel(modulus_, d).is_subgroup_of(stabilizer_)) return d;
  return modulus_;
}

AbelianFieldDescriptor AbelianFieldDescriptor::reduced() const {
  i64 d = conductor();
  return AbelianFieldDescriptor(d, stabilizer_.project(d));
}

bool AbelianFieldDescriptor::contains(const AbelianFieldDescriptor& sub) const {
  i64 l = lcm(modulus_, sub.modulus_);
  return stabilizer_at(l).is_subgroup_of(sub.stabilizer_at(l));
}

bool AbelianFieldDescriptor::contains(const CycNumber& x) const {
  i64 l = lcm(modulus_, x.modulus());
  CycNumber y = x.embed(l);
  auto h = stabilizer_at(l);
  for (i64 g : h.generators())
    if (!(y.galois(g) == y)) return false;
  return true;
}

bool operator==(const AbelianFieldDescriptor& a, const AbelianFieldDescriptor& b) {
  i64 l = lcm(a.modulus_, b.modulus_);
  return a.stabilizer_at(l) == b.stabilizer_at(l);
}

AbelianFieldDescriptor AbelianFieldDescriptor::compositum(const AbelianFieldDescriptor& o) const {
  i64 l = lcm(modulus_, o.modulus_);
  return AbelianFieldDescriptor(l, stabilizer_at(l).intersect(o.stabilizer_at(l))).reduced();
}

AbelianFieldDescriptor AbelianFieldDescriptor::intersection(const AbelianFieldDescriptor& o) const {
  i64 l = lcm(modulus_, o.modulus_);
  return AbelianFieldDescriptor(l, stabilizer_at(l).join(o.stabilizer_at(l))).reduced();
}

std::string AbelianFieldDescriptor::describe() const {
  auto r = reduced();
  if (r.modulus_ == 1) return "Q";
  std::string base = "Q(zeta_" + std::to_string(r.modulus_) + ")";
  if (r.stabilizer_.order() == 1) return base;
  std::string out = base + "^<";
  auto gens = r.stabilizer_.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(gens[i]);
  }
  return out + "> (degree " + std::to_string(r.degree()) + ")";
}

AbelianFieldDescriptor field_of(std::span<const CycNumber> values, i64 modulus) {
  std::vector<i64> candidates = units(modulus);
  for (const auto& v : values) {
    if (v.is_rational()) continue;
    require(modulus % v.modulus() == 0, ErrorCode::InvalidArgument,
            "field_of: value modulus " + std::to_string(v.modulus()) + " does not divide " +
                std::to_string(modulus));
    CycNumber e = v.embed(modulus);
    std::vector<i64> keep;
    for (i64 l : candidates)
      if (e.galois(l) == e) keep.push_back(l);
    candidates.swap(keep);
    if (candidates.size() == 1) break;
  }
  UnitSubgroup h = UnitSubgroup::generated(modulus, candidates);
  if (h.order() != candidates.size()) fail(ErrorCode::Internal, "field_of: stabilizer is not a group");
  return AbelianFieldDescriptor(modulus, h);
}

UnitSubgroup intersect_with_cyclotomic(const AbelianFieldDescriptor& field, i64 mprime) {
  require(mprime >= 1, ErrorCode::InvalidArgument, "intersect_with_cyclotomic: m' must be positive");
  i64 l = lcm(field.modulus(), mprime);
  auto joined = field.stabilizer_at(l).join(UnitSubgroup::reduction_kernel(l, mprime));
  return joined.project(mprime);
}

}  // namespace cuspfield
