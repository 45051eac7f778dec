#pragma once

#include "weilkit/weil_algebra.hpp"

#include <string>

namespace weilkit {

/// Presented text form:
///
///     weil Q[x,y]/(x^2, x*y, y^3)
///
/// The leading `weil` keyword is optional on input and always written.
WeilAlgebra parse_presentation(const std::string &text);
std::string serialize_presentation(const WeilAlgebra &w);

/// Tabled text form, one directive per line:
///
///     weil tabled
///     dim 2
///     unit 0
///     augmentation 1 0
///     c 0 0 0 1
///     c 0 1 1 1
///     c 1 0 1 1
///     end
///
/// `c i j k v` lists each nonzero structure constant (e_i e_j has
/// coefficient v on e_k) in (i, j, k) order; values are exact rationals.
WeilAlgebra parse_tabled(const std::string &text);
std::string serialize_tabled(const WeilAlgebra &w);

/// Dispatches on the first word (`weil tabled` vs a presentation).
WeilAlgebra parse_algebra(const std::string &text);
/// Presented algebras use the presentation form, all others the tabled form.
std::string serialize_algebra(const WeilAlgebra &w);

} // namespace weilkit
