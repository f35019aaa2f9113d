// serialize.hpp - text formats for candidate sets, response maps and codebooks.
//
// All three share the same layout: a magic line, `key=value` header lines,
// then one record per line. Floating-point values use 17 significant digits
// so a write/read cycle is exact.

#pragma once

#include <filesystem>
#include <iosfwd>

#include "fris/channel.hpp"
#include "fris/codebook.hpp"
#include "fris/geometry.hpp"

namespace fris {

void write_candidate_set(std::ostream& os, const CandidateSet& candidates);
CandidateSet read_candidate_set(std::istream& is);

void write_response_map(std::ostream& os, const ResponseMap& map);
ResponseMap read_response_map(std::istream& is);

void write_codebook(std::ostream& os, const Codebook& codebook);
Codebook read_codebook(std::istream& is);

// File wrappers; failures raise IoError carrying the path.
void save_candidate_set(const std::filesystem::path& path, const CandidateSet& candidates);
void save_response_map(const std::filesystem::path& path, const ResponseMap& map);
void save_codebook(const std::filesystem::path& path, const Codebook& codebook);
CandidateSet load_candidate_set(const std::filesystem::path& path);
ResponseMap load_response_map(const std::filesystem::path& path);
Codebook load_codebook(const std::filesystem::path& path);

}  // namespace fris
