#pragma once

#include <string>

#include "mfg/grid.hpp"

namespace mfg {

// CSV: header line, then one row per entry with index, coordinates and value.
// Face fields additionally carry the component axis.
void write_csv(const Field& f, const std::string& path);

// Binary dump, little-endian:
//   magic "MFGF" | u32 version (=1) | u8 kind | u8 dim | u32 n | f64 payload
void write_dump(const Field& f, const std::string& path);
Field read_dump(const std::string& path);

}  // namespace mfg
