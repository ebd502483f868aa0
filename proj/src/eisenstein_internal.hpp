#pragma once

#include <memory>

#include "cuspfield/eisenstein.hpp"
#include "zseries.hpp"

namespace cuspfield {

/// Expansion of a single index as an integral series (cached, shared).
std::shared_ptr<const ZSeries> eis_zseries(const EisIndex& idx, i64 prec);
/// Product of the factors of a canonical monomial (cached, shared).
std::shared_ptr<const ZSeries> monomial_zseries(const EisMonomial& m, i64 prec);

}  // namespace cuspfield
