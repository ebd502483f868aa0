#include "cuspfield/formfile.hpp"

#include <fstream>
#include <sstream>

#include "cuspfield/error.hpp"

namespace cuspfield {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

i64 parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const i64 v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::Parse, "form file: bad " + what + " '" + s + "'");
}

}  // namespace

DirichletCharacter parse_character(std::string_view text) {
  const std::string s = trim(text);
  const auto colon = s.find(':');
  if (colon == std::string::npos) fail(ErrorCode::Parse, "character: expected 'N: g->r, ...'");
  const i64 n = parse_int(trim(s.substr(0, colon)), "character modulus");
  if (n < 1) fail(ErrorCode::Parse, "character: modulus must be positive");
  const auto gens = unit_generators(n);
  std::vector<mpq_class> exps;
  std::string rest = s.substr(colon + 1);
  std::istringstream in(rest);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto arrow = item.find("->");
    if (arrow == std::string::npos) fail(ErrorCode::Parse, "character: expected 'g->r' in '" + item + "'");
    const i64 g = parse_int(trim(item.substr(0, arrow)), "character generator");
    if (exps.size() >= gens.size() || gens[exps.size()].value != g)
      fail(ErrorCode::Parse, "character: generators must be the canonical ones of (Z/" + std::to_string(n) + ")^x in order");
    mpq_class r;
    if (r.set_str(trim(item.substr(arrow + 2)), 10) != 0 || r.get_den() == 0)
      fail(ErrorCode::Parse, "character: bad exponent in '" + item + "'");
    r.canonicalize();
    exps.push_back(r);
  }
  if (exps.size() != gens.size()) fail(ErrorCode::Parse, "character: wrong number of generator exponents");
  return DirichletCharacter::from_generator_exponents(n, exps);
}

std::string format_value(const CycNumber& v) {
  const CycNumber m = v.minimal();
  if (m.modulus() == 1) return m.coord(0).get_str();
  return m.to_string();
}

CycNumber parse_value(std::string_view text) {
  const std::string s = trim(text);
  if (s.find(':') != std::string::npos) return CycNumber::parse(s);
  mpq_class q;
  if (s.empty() || s.find_first_not_of("0123456789-/") != std::string::npos || q.set_str(s, 10) != 0 ||
      q.get_den() == 0)
    fail(ErrorCode::Parse, "bad value '" + s + "'");
  q.canonicalize();
  return CycNumber::rational(q);
}

FormFile parse_form_file(std::string_view text) {
  FormFile out;
  ModularFormInput& f = out.form;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  bool seen_level = false, seen_weight = false, in_coeffs = false, ended = false;
  i64 precision = -1;
  std::vector<std::pair<i64, CycNumber>> coeffs;
  auto bad = [&](const std::string& why) { fail(ErrorCode::Parse, "form file line " + std::to_string(lineno) + ": " + why); };
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!in_coeffs && !seen_level && f.name.empty()) out.comments.push_back(trim(line.substr(1)));
      continue;
    }
    if (ended) bad("content after 'end'");
    if (in_coeffs) {
      if (line == "end") {
        in_coeffs = false;
        ended = true;
        continue;
      }
      const auto sp = line.find_first_of(" \t");
      if (sp == std::string::npos) bad("expected 'n value'");
      const i64 n = parse_int(line.substr(0, sp), "coefficient index");
      if (n < 0) bad("negative coefficient index");
      if (!coeffs.empty() && n <= coeffs.back().first) bad("coefficient indices must increase");
      try {
        coeffs.emplace_back(n, parse_value(line.substr(sp + 1)));
      } catch (const Error& e) {
        bad(e.what());
      }
      continue;
    }
    const auto sp = line.find_first_of(" \t");
    const std::string key = line.substr(0, sp);
    const std::string val = sp == std::string::npos ? std::string() : trim(line.substr(sp + 1));
    if (key == "coefficients") {
      if (!val.empty()) bad("'coefficients' takes no value");
      in_coeffs = true;
      out.has_expansion = true;
      continue;
    }
    if (val.empty()) bad("missing value for '" + key + "'");
    if (key == "name") f.name = val;
    else if (key == "level") f.level = parse_int(val, "level"), seen_level = true;
    else if (key == "weight") f.weight = static_cast<int>(parse_int(val, "weight")), seen_weight = true;
    else if (key == "group") {
      try {
        f.group = parse_group_tag(val);
      } catch (const Error& e) {
        bad(e.what());
      }
    } else if (key == "newform") {
      if (val != "yes" && val != "no") bad("newform must be yes or no");
      f.is_newform = val == "yes";
    } else if (key == "character") {
      try {
        f.character = parse_character(val);
      } catch (const Error& e) {
        bad(e.what());
      }
    } else if (key == "field") f.field_modulus = parse_int(val, "field modulus");
    else if (key == "precision") precision = parse_int(val, "precision");
    else if (key == "al") {
      std::istringstream a(val);
      std::string q, e;
      a >> q >> e;
      const i64 qv = parse_int(q, "Atkin-Lehner divisor");
      if (f.atkin_lehner.count(qv)) bad("duplicate Atkin-Lehner entry");
      f.atkin_lehner[qv] = static_cast<int>(parse_int(e, "Atkin-Lehner eigenvalue"));
    } else bad("unknown key '" + key + "'");
  }
  if (in_coeffs) fail(ErrorCode::Parse, "form file: missing 'end'");
  if (!seen_level || !seen_weight) fail(ErrorCode::Parse, "form file: level and weight are required");
  if (f.level < 1 || f.weight < 1 || f.field_modulus < 1) fail(ErrorCode::Parse, "form file: level, weight and field must be positive");
  if (out.has_expansion) {
    if (precision < 0) fail(ErrorCode::Parse, "form file: 'precision' is required with coefficients");
    std::vector<CycNumber> c(static_cast<std::size_t>(precision), CycNumber::zero());
    for (auto& [n, v] : coeffs) {
      if (n >= precision) fail(ErrorCode::Parse, "form file: coefficient index " + std::to_string(n) + " beyond precision");
      if (f.field_modulus % v.modulus() != 0)
        fail(ErrorCode::InvalidArgument, "form file: coefficient " + std::to_string(n) + " is not in Q(zeta_" +
                                             std::to_string(f.field_modulus) + ")");
      c[static_cast<std::size_t>(n)] = v;
    }
    f.expansion = QExpansion(f.expansion_width(), std::move(c), f.field_modulus);
  } else {
    f.expansion = QExpansion(f.expansion_width(), 0, f.field_modulus);
  }
  f.validate(out.has_expansion);
  return out;
}

std::string serialize_form_file(const FormFile& file) {
  const ModularFormInput& f = file.form;
  std::ostringstream os;
  for (const auto& c : file.comments) os << '#' << (c.empty() ? "" : " ") << c << '\n';
  if (!f.name.empty()) os << "name " << f.name << '\n';
  os << "level " << f.level << '\n';
  os << "weight " << f.weight << '\n';
  os << "group " << group_tag_name(f.group) << '\n';
  os << "newform " << (f.is_newform ? "yes" : "no") << '\n';
  if (f.character) os << "character " << f.character->to_string() << '\n';
  os << "field " << f.field_modulus << '\n';
  for (const auto& [q, e] : f.atkin_lehner) os << "al " << q << ' ' << e << '\n';
  if (file.has_expansion) {
    os << "precision " << f.expansion.prec() << '\n';
    os << "coefficients\n";
    for (i64 n = 0; n < f.expansion.prec(); ++n)
      if (!f.expansion.coeff(n).is_zero()) os << n << ' ' << format_value(f.expansion.coeff(n)) << '\n';
    os << "end\n";
  }
  return os.str();
}

FormFile load_form_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open form file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_form_file(ss.str());
}

void save_form_file(const std::string& path, const FormFile& f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write form file '" + path + "'");
  out << serialize_form_file(f);
  if (!out) fail(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace cuspfield
