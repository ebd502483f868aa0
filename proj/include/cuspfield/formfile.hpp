#pragma once

// Hand-writable text files describing a modular form: metadata, optional
// character, optional Atkin-Lehner table and exact coefficients.
//
//   # free comment lines (kept verbatim at the top)
//   name 11a
//   level 11
//   weight 2
//   group gamma0
//   newform yes
//   character 9: 2->1/6        (optional, gamma0 only)
//   field 1                    (coefficients lie in Q(zeta_field))
//   al 11 -1                   (optional, repeatable)
//   precision 300              (number of coefficients c_0 .. c_{P-1})
//   coefficients               (optional block; omitted for metadata-only files)
//   1 1
//   2 -2
//   end
//
// Coefficient lines are "n value" for nonzero c_n in increasing n; a value is
// a rational "p/q" or a cyclotomic "M:[c_0,...]".

#include <string>
#include <string_view>
#include <vector>

#include "cuspfield/engine.hpp"

namespace cuspfield {

struct FormFile {
  std::vector<std::string> comments;  // without the leading '#'
  ModularFormInput form;
  bool has_expansion = false;
};

DirichletCharacter parse_character(std::string_view text);

/// Parses and validates; metadata-only files skip the precision requirement.
FormFile parse_form_file(std::string_view text);
/// Canonical text; parse_form_file(serialize_form_file(f)) reproduces f.
std::string serialize_form_file(const FormFile& f);

FormFile load_form_file(const std::string& path);
void save_form_file(const std::string& path, const FormFile& f);

/// A coefficient as written in form files.
std::string format_value(const CycNumber& v);
CycNumber parse_value(std::string_view text);

}  // namespace cuspfield
