#include "cuspfield/cuspfield.h"

#include <chrono>
#include <cstring>
#include <string>

#include "cuspfield/cache.hpp"
#include "cuspfield/error.hpp"
#include "cuspfield/field_bounds.hpp"
#include "cuspfield/formfile.hpp"
#include "cuspfield/verify.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;
using namespace cuspfield;

struct cf_form {
  FormFile file;
};

namespace {

thread_local std::string g_last_error;

cf_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return CF_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return CF_ERR_PARSE;
    case ErrorCode::Domain: return CF_ERR_DOMAIN;
    case ErrorCode::NotModular: return CF_ERR_NOT_MODULAR;
    case ErrorCode::Unsupported: return CF_ERR_UNSUPPORTED;
    case ErrorCode::Io: return CF_ERR_IO;
    case ErrorCode::Internal: return CF_ERR_INTERNAL;
  }
  return CF_ERR_INTERNAL;
}

template <class F>
cf_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return CF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    g_last_error = std::string("json: ") + e.what();
    return CF_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CF_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

MatZ to_mat(cf_matrix g) { return MatZ{g.a, g.b, g.c, g.d}; }

json field_json(const AbelianFieldDescriptor& f) {
  const auto r = f.reduced();
  return json{{"description", r.describe()}, {"conductor", r.modulus()}, {"degree", r.degree()}};
}

FormMetadata metadata_for(const FormFile& file) {
  if (file.has_expansion) return metadata_of(file.form);
  return FormMetadata{file.form.level, file.form.weight, file.form.chi(),
                      AbelianFieldDescriptor::cyclotomic(file.form.field_modulus).reduced()};
}

json bound_json(const FormMetadata& meta, const MatZ& g) {
  const FieldBoundReport r = field_bound(meta, g);
  json chi_g = json::object();
  for (const auto& [mu, v] : r.chi_g_values) chi_g[std::to_string(mu)] = format_value(v);
  const auto gp = r.gprime.elements();
  json out{{"level", meta.level},
           {"weight", meta.weight},
           {"character", meta.chi.to_string()},
           {"matrix", g.to_string()},
           {"kf", field_json(meta.kf)},
           {"nprime", r.nprime},
           {"mprime", r.mprime},
           {"M", r.M},
           {"gprime", std::vector<i64>(gp.begin(), gp.end())},
           {"chi_g", chi_g},
           {"rejected_zeta_exponents", r.rejected_zetas},
           {"zeta_exponent", r.zeta_choice},
           {"c", format_value(r.c)},
           {"base_field", field_json(r.base_field)},
           {"module", r.module_description()},
           {"composite_field", field_json(r.composite_field)}};
  return out;
}

json plan_steps(const CuspPlan& p) {
  const MatZ start = p.gprime * MatZ::T(p.u);
  json steps = json::array({"F = slash_expand(f, " + start.to_string() + ")"});
  if (p.u != 0) steps.push_back("F = F.apply_T_power(" + std::to_string(-p.u) + ")");
  if (!(p.upper == MatZ::identity()))
    steps.push_back("F = apply_upper_triangular(F, " + std::to_string(p.upper.a) + ", " + std::to_string(p.upper.b) + ", " +
                    std::to_string(p.upper.d) + ", k).series.reduce_width(" + std::to_string(p.level) + ")");
  if (p.q != 1) steps.push_back("f|g = epsilon_" + std::to_string(p.q) + " * F, epsilon the W_" + std::to_string(p.q) + " eigenvalue of f");
  return steps;
}

json plan_json(const CuspPlan& p) {
  return json{{"level", p.level},
              {"conductor", p.conductor},
              {"matrix", p.g.to_string()},
              {"delta", p.delta},
              {"Q", p.q},
              {"mprime", p.mprime},
              {"h_Q", p.h.to_string()},
              {"g2", p.g2.to_string()},
              {"upper", p.upper.to_string()},
              {"g_prime", p.gprime.to_string()},
              {"u", p.u},
              {"translated_mprime", p.translated_mprime},
              {"working_field", "K_f(zeta_" + std::to_string(p.translated_mprime) + ")"},
              {"steps", plan_steps(p)}};
}

MatZ cusp_matrix(i64 a, i64 c) {
  if (c == 0) {
    require(a == 1 || a == -1, ErrorCode::InvalidArgument, "cusp at infinity must be written 1/0");
    return MatZ::identity();
  }
  require(gcd(a, c) == 1, ErrorCode::InvalidArgument, "cusp must be in lowest terms");
  const Egcd e = egcd(a, c);  // x a + y c = 1
  return MatZ{a, -e.y, c, e.x};
}

SuiteOptions options_from(const char* text) {
  SuiteOptions o;
  if (!text || !*text) return o;
  const json j = json::parse(text);
  if (!j.is_object()) fail(ErrorCode::Parse, "suite options must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "max_level") o.max_level = it->get<i64>();
    else if (k == "weights") o.weights = it->get<std::vector<int>>();
    else if (k == "tilde") o.tilde = it->get<bool>();
    else if (k == "max_weight") o.max_weight = it->get<int>();
    else if (k == "cases") o.cases = it->get<int>();
    else if (k == "relation_prec") o.relation_prec = it->get<i64>();
    else if (k == "brute_level") o.brute_level = it->get<i64>();
    else if (k == "optimal_level") o.optimal_level = it->get<i64>();
    else if (k == "matrices") o.matrices = it->get<int>();
    else if (k == "tolerance") o.tolerance = it->get<double>();
    else if (k == "seed") o.seed = it->get<std::uint32_t>();
    else fail(ErrorCode::InvalidArgument, "unknown suite option '" + k + "'");
  }
  require(o.max_level >= 1 && o.max_level <= 64, ErrorCode::InvalidArgument, "max_level must lie in [1, 64]");
  require(o.relation_prec >= 1 && o.relation_prec <= 20000, ErrorCode::InvalidArgument, "relation_prec must lie in [1, 20000]");
  require(o.cases >= 0, ErrorCode::InvalidArgument, "cases must be nonnegative");
  return o;
}

}  // namespace

extern "C" {

const char* cf_version(void) { return "1.0.0"; }
const char* cf_last_error(void) { return g_last_error.c_str(); }
void cf_string_free(char* s) { std::free(s); }

cf_status cf_matrix_parse(const char* text, cf_matrix* out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    const MatZ g = MatZ::parse(text);
    *out = cf_matrix{g.a, g.b, g.c, g.d};
  });
}

cf_status cf_form_load(const char* path, cf_form** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new cf_form{load_form_file(path)};
  });
}

cf_status cf_form_parse(const char* text, cf_form** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new cf_form{parse_form_file(text)};
  });
}

void cf_form_free(cf_form* f) { delete f; }

cf_status cf_form_serialize(const cf_form* f, char** text) {
  return guarded([&] {
    need(f, "form");
    need(text, "text");
    *text = dup(serialize_form_file(f->file));
  });
}

cf_status cf_form_info(const cf_form* f, char** out) {
  return guarded([&] {
    need(f, "form");
    need(out, "out");
    const auto& m = f->file.form;
    json al = json::object();
    for (const auto& [q, e] : m.atkin_lehner) al[std::to_string(q)] = e;
    json j{{"name", m.name},
           {"level", m.level},
           {"weight", m.weight},
           {"group", group_tag_name(m.group)},
           {"character", m.chi().to_string()},
           {"field", m.field_modulus},
           {"newform", m.is_newform},
           {"has_expansion", f->file.has_expansion},
           {"precision", f->file.has_expansion ? m.expansion.prec() : 0},
           {"atkin_lehner", al},
           {"kf", field_json(metadata_for(f->file).kf)}};
    *out = dup(j.dump(2));
  });
}

cf_status cf_expand(const cf_form* f, cf_matrix gm, long long prec, int use_cache, char** series, char** summary) {
  return guarded([&] {
    need(f, "form");
    need(series, "series");
    need(summary, "summary");
    const FormFile& file = f->file;
    require(file.has_expansion, ErrorCode::InvalidArgument, "expand needs a form file with coefficients");
    const ModularFormInput& form = file.form;
    const MatZ g = to_mat(gm);
    require(g.det() == 1, ErrorCode::InvalidArgument, "matrix " + g.to_string() + " is not in SL2(Z)");
    const i64 p = prec > 0 ? prec : default_precision(form);
    const auto t0 = std::chrono::steady_clock::now();
    QExpansion fg;
    CacheOutcome co;
    if (use_cache) fg = evaluate(cached_decomposition(form, &co), g, p);
    else fg = slash_expand(form, g, p);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const FormMetadata meta = metadata_of(form);
    const FieldBoundReport rep = field_bound(meta, g);
    const AbelianFieldDescriptor base = rep.base_field.reduced();
    const AbelianFieldDescriptor predicted = rep.composite_field.reduced();
    const AbelianFieldDescriptor observed = field_of(fg.coeffs(), lcm(fg.modulus(), predicted.modulus())).reduced();
    bool in_module = true;
    for (const auto& c : fg.coeffs()) in_module = in_module && rep.in_module(c);
    FieldVerdict v = FieldVerdict::Contained;
    if (!in_module || !predicted.contains(observed)) v = FieldVerdict::NotContained;
    else if (form.is_newform && form.group == GroupTag::Gamma0 && form.chi().is_trivial())
      v = observed == base ? FieldVerdict::Exact : FieldVerdict::StrictlySmaller;
    json j{{"form", form.name},
           {"matrix", g.to_string()},
           {"precision", p},
           {"width", fg.width()},
           {"predicted_module", rep.module_description()},
           {"predicted_field", field_json(predicted)},
           {"observed_field", field_json(observed)},
           {"in_predicted_module", in_module},
           {"verdict", verdict_name(v)},
           {"cache", use_cache ? (co.hit ? "hit" : "miss") : "off"},
           {"seconds", secs}};
    *series = dup(fg.to_string());
    *summary = dup(j.dump(2));
  });
}

cf_status cf_bound(const cf_form* f, cf_matrix g, char** out) {
  return guarded([&] {
    need(f, "form");
    need(out, "out");
    *out = dup(bound_json(metadata_for(f->file), to_mat(g)).dump(2));
  });
}

cf_status cf_bound_metadata(long long level, int weight, const char* character, long long kf_modulus, cf_matrix g,
                            char** out) {
  return guarded([&] {
    need(out, "out");
    require(level >= 1 && weight >= 1 && kf_modulus >= 1, ErrorCode::InvalidArgument,
            "level, weight and field modulus must be positive");
    const DirichletCharacter chi = character && *character ? parse_character(character) : DirichletCharacter::trivial(level);
    const FormMetadata meta{level, weight, chi, AbelianFieldDescriptor::cyclotomic(kf_modulus).reduced()};
    *out = dup(bound_json(meta, to_mat(g)).dump(2));
  });
}

cf_status cf_bound_sweep(const cf_form* f, char** out) {
  return guarded([&] {
    need(f, "form");
    need(out, "out");
    const FormMetadata meta = metadata_for(f->file);
    const i64 n = meta.level;
    json arr = json::array();
    for (i64 c : divisors(n)) {
      // cusps a/c of X0(N) with denominator c: a modulo gcd(c, N/c)
      const i64 r = gcd(c, n / c);
      for (i64 a = 1; a <= std::max<i64>(r, 1); ++a) {
        if (gcd(a, r) != 1) continue;
        i64 aa = a;
        while (gcd(aa, c) != 1) aa += r;
        const MatZ g = c == n ? MatZ::identity() : cusp_matrix(aa, c);
        json e = bound_json(meta, g);
        e["cusp"] = c == n ? "1/0" : std::to_string(aa) + "/" + std::to_string(c);
        const CuspPlan p = plan_cusp(n, meta.chi.conductor(), g);
        e["suggestion"] = json{{"Q", p.q}, {"mprime", p.mprime}, {"u", p.u}};
        arr.push_back(e);
      }
    }
    *out = dup(json{{"level", n}, {"cusps", arr}}.dump(2));
  });
}

cf_status cf_optimize(long long level, long long cusp_a, long long cusp_c, long long conductor, char** out) {
  return guarded([&] {
    need(out, "out");
    require(level >= 1 && conductor >= 1 && level % conductor == 0, ErrorCode::InvalidArgument,
            "conductor must divide the level");
    const MatZ g = cusp_matrix(cusp_a, cusp_c);
    *out = dup(plan_json(plan_cusp(level, conductor, g)).dump(2));
  });
}

cf_status cf_optimize_replay(const cf_form* f, cf_matrix gm, long long prec, char** out) {
  return guarded([&] {
    need(f, "form");
    need(out, "out");
    require(f->file.has_expansion, ErrorCode::InvalidArgument, "replay needs a form file with coefficients");
    const ModularFormInput& form = f->file.form;
    const MatZ g = to_mat(gm);
    const CuspPlan p = plan_cusp(form.level, form.chi().conductor(), g);
    const i64 pr = prec > 0 ? prec : 4 * form.level;
    const QExpansion via = replay_plan(form, p, pr);
    const QExpansion direct = slash_expand(form, g, pr);
    const QExpansion w = plan_working_series(form, p, pr);
    json j = plan_json(p);
    j["precision"] = pr;
    j["replay_equal"] = via == direct;
    j["working_series_field"] = field_json(field_of(w.coeffs(), w.modulus()));
    *out = dup(j.dump(2));
  });
}

cf_status cf_verify(const char* suite, const char* options_json, const cf_form* const* forms, int count, char** out) {
  return guarded([&] {
    need(suite, "suite");
    need(out, "out");
    SuiteOptions o = options_from(options_json);
    require(count >= 0 && (count == 0 || forms), ErrorCode::InvalidArgument, "bad form list");
    for (int i = 0; i < count; ++i) {
      need(forms[i], "form");
      require(forms[i]->file.has_expansion, ErrorCode::InvalidArgument, "verification needs forms with coefficients");
      o.forms.push_back(forms[i]->file.form);
    }
    DenominatorLog log;
    o.denominators = &log;
    const SuiteReport r = run_suite(suite, o);
    json j{{"suite", r.name},
           {"passed", r.passed()},
           {"checks", r.checks},
           {"failures", r.failures},
           {"failure_details", r.failure_details},
           {"seconds", r.seconds},
           {"denominator_series", log.series},
           {"denominator_violations", log.violations},
           {"denominator_details", log.details}};
    *out = dup(j.dump(2));
  });
}

cf_status cf_suite_names(char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup(json(suite_names()).dump());
  });
}

cf_status cf_cache_build_basis(long long level, int weight, long long prec, char** out) {
  return guarded([&] {
    need(out, "out");
    require(level >= 1 && level <= 12 && weight >= 1 && prec >= 1, ErrorCode::InvalidArgument,
            "basis cache: level in [1,12], positive weight and precision");
    CacheOutcome first, second;
    const EisBasis b = cached_basis(level, weight, prec, &first);
    cached_basis(level, weight, prec, &second);
    json j{{"kind", "basis"},
           {"level", level},
           {"weight", weight},
           {"prec", prec},
           {"rank", b.rank()},
           {"first", {{"hit", first.hit}, {"seconds", first.seconds}}},
           {"second", {{"hit", second.hit}, {"seconds", second.seconds}}},
           {"directory", cache_directory().string()}};
    *out = dup(j.dump(2));
  });
}

cf_status cf_cache_build_form(const cf_form* f, char** out) {
  return guarded([&] {
    need(f, "form");
    need(out, "out");
    require(f->file.has_expansion, ErrorCode::InvalidArgument, "cache build needs a form file with coefficients");
    CacheOutcome first, second;
    const EisDecomposition d = cached_decomposition(f->file.form, &first);
    cached_decomposition(f->file.form, &second);
    json j{{"kind", "decomposition"},
           {"form", f->file.form.name},
           {"terms", d.terms.size()},
           {"first", {{"hit", first.hit}, {"seconds", first.seconds}}},
           {"second", {{"hit", second.hit}, {"seconds", second.seconds}}},
           {"directory", cache_directory().string()}};
    *out = dup(j.dump(2));
  });
}

cf_status cf_cache_inspect(char** out) {
  return guarded([&] {
    need(out, "out");
    json arr = json::array();
    for (const auto& e : inspect_cache())
      arr.push_back(json{{"file", e.file}, {"kind", e.kind}, {"key", e.key}, {"valid", e.valid}, {"bytes", e.bytes}});
    *out = dup(json{{"directory", cache_directory().string()}, {"entries", arr}}.dump(2));
  });
}

cf_status cf_cache_purge(char** out) {
  return guarded([&] {
    need(out, "out");
    const std::size_t n = purge_cache();
    *out = dup(json{{"directory", cache_directory().string()}, {"removed", n}}.dump(2));
  });
}

}  // extern "C"
