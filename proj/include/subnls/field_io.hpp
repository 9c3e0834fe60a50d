#pragma once

#include <iosfwd>
#include <string>

#include "subnls/grid.hpp"

namespace subnls {

/// Two-column CSV: a line `# N=<N> r_max=<r_max> n=<n>` followed by `r,u(r)`
/// rows for nodes 0..n, all numbers with 17 significant digits so the profile
/// round-trips bit-exactly.
void write_profile_csv(std::ostream& os, const RadialField& u);
void write_profile_csv(const std::string& path, const RadialField& u);

RadialField read_profile_csv(std::istream& is);
RadialField read_profile_csv(const std::string& path);

/// Write to `path` through a temporary file and rename, so readers never see partial files.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace subnls
