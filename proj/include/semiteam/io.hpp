#pragma once

#include <iosfwd>
#include <string>

#include "semiteam/interpretation.hpp"

namespace semiteam {

/// Line-oriented structure files:
///   universe: a b c
///   rel R/2: a a | a b | c b
/// Blank lines and '#' comments are skipped.
Structure load_structure(std::istream& in);
Structure load_structure_file(const std::string& path);
std::string save_structure(const Structure& a);

/// Interpretation files share the structure header (relations may omit the
/// extension) and add literal values:
///   default: 0
///   lit R(a,b) = 3
///   lit !R(a,b) = 1/2
/// Omitted literals take the declared default (0 when absent).
KInterpretation load_interpretation(std::istream& in, const SpecPtr& spec);
KInterpretation load_interpretation_file(const std::string& path, const SpecPtr& spec);

} // namespace semiteam
