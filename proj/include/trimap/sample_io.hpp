#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trimap/sample_set.hpp"

namespace trimap {

/// Delimited text, one point per row; `#` comment header carries dimension,
/// provenance and seed plus any tool metadata.
void write_samples(const std::string& path, const SampleSet& samples,
                   const std::vector<std::string>& header_comments = {});
void write_samples(std::ostream& os, const SampleSet& samples,
                   const std::vector<std::string>& header_comments = {});

SampleSet read_samples(const std::string& path);
SampleSet read_samples(std::istream& is);

}  // namespace trimap
