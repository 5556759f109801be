#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "qpb/linear.hpp"

namespace qpb {

/// Maps a generator name to its index, or -1 if the name is not a generator.
using GenLookup = std::function<int(const std::string&)>;

/// Parses a noncommutative polynomial with scalar coefficients into a
/// combination of free (unreduced) words.
///
/// Factors multiply by `*` or by juxtaposition.  A generator name may carry a
/// `*` suffix when `name*` is itself a generator; a `*` directly followed by an
/// operand (letter, digit, parenthesis) is multiplication instead, so
/// "alpha*gamma" is a product while "alpha* gamma" starts with alpha*.
/// Division and negative powers are allowed on scalar factors only.
Lin parse_free(std::string_view text, const GenLookup& lookup);

}  // namespace qpb
