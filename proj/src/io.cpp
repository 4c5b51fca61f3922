#include "extrap/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace extrap::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

GridFunction read_function(std::istream& in) {
  std::string header;
  while (std::getline(in, header) && trim(header).empty()) {
  }
  header = trim(header);
  if (header.rfind("dims:", 0) != 0) throw FormatError("missing 'dims:' header line");

  std::istringstream dims_stream(header.substr(5));
  std::vector<Index> dims;
  std::string token;
  while (dims_stream >> token) {
    Index d = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), d);
    if (ec != std::errc() || ptr != token.data() + token.size() || d == 0) {
      throw FormatError("invalid dimension '" + token + "' in header");
    }
    dims.push_back(d);
  }
  if (dims.empty()) throw FormatError("'dims:' header lists no dimensions");
  DiscreteSpace space(dims);

  std::vector<double> values;
  values.reserve(space.size());
  while (in >> token) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw FormatError("non-numeric entry '" + token + "' at position " + std::to_string(values.size()));
    }
    values.push_back(v);
  }
  if (values.size() != space.size()) {
    throw FormatError("expected " + std::to_string(space.size()) + " values, found " +
                      std::to_string(values.size()));
  }
  return GridFunction(space, std::move(values));
}

void write_function(std::ostream& out, const GridFunction& f) {
  out << "dims:";
  for (Index d : f.space().dims()) out << ' ' << d;
  out << '\n' << std::setprecision(17);
  const Index row = f.space().dims().back();
  for (Index i = 0; i < f.size(); ++i) {
    out << f[i] << ((i + 1) % row == 0 ? '\n' : ' ');
  }
}

GridFunction load_function(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return read_function(in);
}

void save_function(const std::filesystem::path& path, const GridFunction& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_function(out, f);
}

}  // namespace extrap::io
