#include "rarerel/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "rarerel/text.hpp"

namespace fs = std::filesystem;

namespace rarerel {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

LoadedCorpus load_corpus(const fs::path& dir, bool strict) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::map<std::string, std::pair<bool, bool>> stems;  // (has txt, has ann)
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".txt") stems[entry.path().stem().string()].first = true;
    else if (ext == ".ann") stems[entry.path().stem().string()].second = true;
  }

  LoadedCorpus corpus;
  for (const auto& [stem, has] : stems) {
    if (!has.first || !has.second) {
      const std::string message =
          "orphan " + (dir / (stem + (has.first ? ".txt" : ".ann"))).string() + " has no matching " +
          (has.first ? ".ann" : ".txt");
      if (strict) throw IoError(message);
      corpus.warnings.push_back(message);
      continue;
    }
    const fs::path txt = dir / (stem + ".txt");
    const fs::path ann = dir / (stem + ".ann");
    try {
      corpus.documents.push_back(parse_document(read_file(txt), read_file(ann), stem));
    } catch (const ParseError& e) {
      throw IoError(ann.string() + ": " + e.what());
    }
  }
  return corpus;
}

void write_document(const fs::path& dir, const AnnotatedDocument& doc) {
  const auto [text, ann] = serialize_document(doc);
  write_file(dir / (doc.doc_id() + ".txt"), text);
  write_file(dir / (doc.doc_id() + ".ann"), ann);
}

std::vector<std::string> read_manifest(const fs::path& path) {
  std::vector<std::string> ids;
  const std::string content = read_file(path);
  for (std::string_view line : split(content, '\n')) {
    line = trim(line);
    if (!line.empty()) ids.emplace_back(line);
  }
  return ids;
}

}  // namespace rarerel
