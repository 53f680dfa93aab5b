#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rarerel/standoff.hpp"

namespace rarerel {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);
/// Creates parent directories as needed.
void write_file(const std::filesystem::path& path, const std::string& content);

struct LoadedCorpus {
  std::vector<AnnotatedDocument> documents;  // sorted by doc_id
  std::vector<std::string> warnings;
};

/// Reads every `<id>.txt`/`<id>.ann` pair in `dir` (not recursive).  An
/// orphaned file is an IoError when `strict`, a warning otherwise.  Parse
/// errors are rethrown as IoError prefixed with the file name.
LoadedCorpus load_corpus(const std::filesystem::path& dir, bool strict);

void write_document(const std::filesystem::path& dir, const AnnotatedDocument& doc);

/// Newline-separated doc ids; blank lines are skipped.
std::vector<std::string> read_manifest(const std::filesystem::path& path);

}  // namespace rarerel
