#pragma once

#include <iosfwd>
#include <string>

#include "machlimit/spectral_field.hpp"
#include "machlimit/trajectory.hpp"

namespace machlimit {

/// Binary snapshot, little-endian:
/// magic "MLSF", version u32, d u32, n u32 per axis, L f64, then row-major
/// complex f64 coefficients.
void write_snapshot(std::ostream& os, const SpectralField& f);
SpectralField read_snapshot(std::istream& is);

void write_snapshot_file(const std::string& path, const SpectralField& f);
SpectralField read_snapshot_file(const std::string& path);

/// Norm series CSV, columns t, j, p, value; rows ordered by (t, j, p).
void write_norm_csv(std::ostream& os, const TrajectorySeries& ts);
TrajectorySeries read_norm_csv(std::istream& is);

void write_norm_csv_file(const std::string& path, const TrajectorySeries& ts);
TrajectorySeries read_norm_csv_file(const std::string& path);

/// FNV-1a 64-bit digest of a file, as 16 hex characters.
std::string file_checksum(const std::string& path);

} // namespace machlimit
