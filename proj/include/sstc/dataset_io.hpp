#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "sstc/geometry.hpp"
#include "sstc/taxonomy.hpp"

namespace sstc {

/// Reads the `feature,x,y` instance CSV. Features must be taxonomy leaves; instance ids
/// are per-feature ordinals in file order. Parse failures throw ParseError naming the
/// 1-based line; an unknown or non-leaf feature throws UnknownFeature with the line.
Dataset read_instances_csv(std::istream& in, const Taxonomy& taxonomy,
                           const std::string& source_name = "<stream>");
Dataset read_instances_csv(const std::filesystem::path& path, const Taxonomy& taxonomy);

/// Writes rows in dataset order with shortest round-trip float formatting.
void write_instances_csv(std::ostream& out, const Dataset& data, const Taxonomy& taxonomy);

Taxonomy read_taxonomy_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace sstc
