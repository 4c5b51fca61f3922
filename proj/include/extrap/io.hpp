#ifndef EXTRAP_IO_HPP
#define EXTRAP_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "extrap/space.hpp"

namespace extrap::io {

/// Malformed function/kernel file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text format: a header line "dims: n1 n2 ...", then n1·n2·… whitespace-separated
/// decimal values in row-major order. Values are written with 17 significant digits.
GridFunction read_function(std::istream& in);
void write_function(std::ostream& out, const GridFunction& f);

GridFunction load_function(const std::filesystem::path& path);
void save_function(const std::filesystem::path& path, const GridFunction& f);

/// Kernel files share the function format.
inline GridFunction load_kernel(const std::filesystem::path& path) { return load_function(path); }

}  // namespace extrap::io

#endif  // EXTRAP_IO_HPP
