#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "binmat/binary_matrix.hpp"
#include "binmat/margins.hpp"
#include "binmat/szero.hpp"

namespace binmat {

// Margins file: first data line "m n", second m row sums, third n column
// sums; lines starting with '#' and blank lines are ignored. Throws
// parse_error with the offending 1-based line number.
MarginPair read_margins(std::istream& in);
MarginPair read_margins_file(const std::string& path);

// Mask file: one "i j" pair per data line, 1-based coordinates.
StructuralZeroMask read_mask(std::istream& in, int m, int n);
StructuralZeroMask read_mask_file(const std::string& path, int m, int n);

// Matrix block: m lines of n space-separated 0/1 digits.
void write_matrix(std::ostream& out, const BinaryMatrix& z);
BinaryMatrix read_matrix(std::istream& in, int m, int n);

// Stable 64-bit digest of the margins (FNV-1a over a canonical rendering);
// recorded in output headers so a run can be tied to its inputs.
std::uint64_t margins_hash(const MarginPair& mp);

// "mantissa e exponent" rendering of a value given in natural log, e.g.
// 6.714910e16; usable far past the double range.
std::string format_log_value(double natural_log, int significant_digits = 6);

}  // namespace binmat
