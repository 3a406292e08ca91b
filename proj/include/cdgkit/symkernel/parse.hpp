#pragma once

#include <string_view>

#include "cdgkit/symkernel/param_poly.hpp"

namespace cdg::sym {

/// Parses the kernel's text syntax: integers, the declared symbol names,
/// the imaginary unit i, + - * / ^ and parentheses. Division is only by
/// nonzero constants; exponents are non-negative integer literals.
/// Throws ParseError.
ParamPoly parse_param_poly(std::string_view text);

}  // namespace cdg::sym
