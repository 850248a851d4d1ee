#pragma once

#include <string>

#include "martinet/form.hpp"

namespace martinet {

struct ParseError : Error {
  using Error::Error;
};

// Expression grammar over a fixed chart:
//   sum    := ['-'] wedge (('+' | '-') wedge)*
//   wedge  := product ('^' product)*
//   product:= atom ('*' atom)*
//   atom   := rational | var | 'd' var | 'd' '(' sum ')' | '(' sum ')' | '-' atom
// '*' multiplies by a scalar factor, '^' is the exterior product, and both
// bind tighter than '+'. Rationals are "7" or "7/3". Scalars are 0-forms.
DiffForm parse_form(const std::string& text, const Chart& chart);

// Canonical text for a form; parse_form reads it back verbatim.
std::string print_form(const DiffForm& w);
std::string print_poly(const TruncatedPoly& p);

// A .frm source: a "chart:" line, an optional "weights:" line, then one
// expression (possibly spanning lines). '#' starts a comment.
struct ParsedForm {
  Chart chart;
  DiffForm form;
};

ParsedForm parse_form_source(const std::string& source);
ParsedForm load_form_file(const std::string& path);

}  // namespace martinet
