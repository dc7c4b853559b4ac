#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "setnovo/spectrum.hpp"

namespace setnovo::mgf {

struct ParseError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct ParseResult {
  std::vector<Spectrum> spectra;
  std::vector<ParseError> errors;
};

// Tolerant MGF reader. A malformed record is reported with its line number
// and skipped; parsing resumes at the next BEGIN IONS. Lines outside records
// that are not BEGIN IONS are ignored.
ParseResult parse(std::istream& in);
ParseResult parse_file(const std::string& path);  // throws if unreadable

void write(std::ostream& out, const std::vector<Spectrum>& spectra);
void write_file(const std::string& path,
                const std::vector<Spectrum>& spectra);  // throws if unwritable

}  // namespace setnovo::mgf
