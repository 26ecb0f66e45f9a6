#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fracstab/errors.hpp"
#include "fracstab/quasi_polynomial.hpp"

namespace fracstab {

/// Input file could not be opened or read.
class FileError : public Error {
 public:
  using Error::Error;
};

/**
 * Parses a system definition document:
 *
 *   {
 *     "denominator": [ {"coeff": {"param": "a", "mult": 1}, "order": "1"},
 *                      {"coeff": -2, "order": "0.5"} ],
 *     "numerator":   [ {"coeff": 1, "order": "0"} ],      // optional
 *     "gain": 1                                           // optional
 *   }
 *
 * Orders are strings ("1.31", "1/3") or JSON integers; `mult` defaults to 1.
 * C and C++ style comments are accepted. Throws ParseError for syntax and
 * schema problems, ValidationError for invariant violations.
 */
FracSystem parse_system(std::string_view text);

/// Canonical, byte-stable text form. parse_system(serialize_system(s)) == s.
std::string serialize_system(const FracSystem& system);

/// Reads and parses a file. Throws FileError when the file cannot be read.
FracSystem load_system(const std::filesystem::path& path);

/// Whole file contents; throws FileError.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace fracstab
