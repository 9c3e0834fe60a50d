#include "subnls/field_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "subnls/errors.hpp"

namespace subnls {

namespace {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw IoError("malformed number in profile CSV: '" + s + "'");
  return v;
}

}  // namespace

void write_profile_csv(std::ostream& os, const RadialField& u) {
  const auto& g = *u.grid;
  os << "# N=" << g.dim() << " r_max=" << format17(g.r_max()) << " n=" << g.interior_nodes() << "\n";
  for (std::size_t i = 0; i < u.size(); ++i) os << format17(g.r(i)) << "," << format17(u[i]) << "\n";
}

void write_profile_csv(const std::string& path, const RadialField& u) {
  std::ostringstream os;
  write_profile_csv(os, u);
  write_file_atomic(path, os.str());
}

RadialField read_profile_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw IoError("empty profile CSV");
  int dim = 0, n = 0;
  char rbuf[64] = {0};
  if (std::sscanf(header.c_str(), "# N=%d r_max=%63s n=%d", &dim, rbuf, &n) != 3)
    throw IoError("bad profile CSV header: '" + header + "'");
  const double r_max = parse_double(rbuf);
  auto grid = make_grid(dim, r_max, n);
  RadialField u(grid);
  std::string line;
  std::size_t i = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("profile CSV row without comma: '" + line + "'");
    if (i >= u.size()) throw IoError("profile CSV has more rows than the header's grid");
    const double r = parse_double(line.substr(0, comma));
    if (r != grid->r(i)) throw IoError("profile CSV node " + std::to_string(i) + " does not match the grid");
    u[i++] = parse_double(line.substr(comma + 1));
  }
  if (i != u.size()) throw IoError("profile CSV has fewer rows than the header's grid");
  return u;
}

RadialField read_profile_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  return read_profile_csv(f);
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f << contents;
    if (!f) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace subnls
