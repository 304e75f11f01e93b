#pragma once

// Text coefficient format:
//   t <decimal>
//   parity even
//   rho1 <decimal>
//   <p> <lambda(p)>      one line per prime, increasing p
// Numbers are written with 17 significant digits.

#include <iosfwd>
#include <string>

#include "maasslab/form.hpp"

namespace maasslab {

std::string format_form(const MaassForm& form);
void write_form(std::ostream& out, const MaassForm& form);

/// Throws ParseError (with line number) on malformed input and DomainError on
/// invariant violations. The table extent is the default one, shortened to
/// stop before the first prime missing from the file.
MaassForm parse_form(std::istream& in);
MaassForm parse_form_string(const std::string& text);

void store_form(const std::string& path, const MaassForm& form);  // atomic replace
MaassForm load_form(const std::string& path);

/// Write `contents` to `path` through a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace maasslab
