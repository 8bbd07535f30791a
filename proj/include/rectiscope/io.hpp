#pragma once

#include <iosfwd>
#include <string>

#include "rectiscope/measure.hpp"

namespace rectiscope {

/// Binary point-cloud format: magic "RSC1", little-endian u32 m, u32 N, then
/// N rows of (m coordinates, weight) as float64.
inline constexpr char kBinaryMagic[4] = {'R', 'S', 'C', '1'};

/// 17 significant digits, shortest "%g"-style layout.
std::string format_double(double v);

DiscreteMeasure read_csv(std::istream& in, int intrinsic_dim);
void write_csv(std::ostream& out, const DiscreteMeasure& mu);

DiscreteMeasure read_binary(std::istream& in, int intrinsic_dim);
void write_binary(std::ostream& out, const DiscreteMeasure& mu);

/// Reads either format, detected by the magic bytes.
DiscreteMeasure read_measure(const std::string& path, int intrinsic_dim);
/// Writes binary when the path ends in ".rsc" or ".bin", CSV otherwise.
void write_measure(const std::string& path, const DiscreteMeasure& mu);

}  // namespace rectiscope
