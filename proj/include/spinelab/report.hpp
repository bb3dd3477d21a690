#pragma once

#include <string>

#include <json.hpp>

#include "spinelab/assembly.hpp"
#include "spinelab/corpus.hpp"

namespace spinelab {

// Module structure of the assembled answer, as a display string.
extern const char* const kClosedFormModule;

std::string census_markdown(const Corpus& c);
std::string cells_markdown(const Corpus& c, int dim);
// Census followed by every cell table.
std::string corpus_markdown(const Corpus& c);

std::string component_markdown(const ComponentResult& r, int from_degree = 0);
nlohmann::ordered_json to_json(const ComponentResult& r);

// Per-degree dims from `from_degree` on, plus the closed form.
std::string assembly_markdown(const AssemblyReport& r, int from_degree = 6);
nlohmann::ordered_json to_json(const AssemblyReport& r, int from_degree = 6);

std::string pipeline_markdown(const PipelineReport& r);
nlohmann::ordered_json to_json(const PipelineReport& r);

nlohmann::ordered_json dims_json(const GradedDims& d, int from_degree = 0);

}  // namespace spinelab
