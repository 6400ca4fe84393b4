// Writes the oracle-derived golden corpus under the given directory.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "fpovm/testing/golden.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: golden_gen <output-dir>\n";
    return 2;
  }
  const std::filesystem::path root(argv[1]);
  for (const auto& file : fpovm::testing::golden_corpus()) {
    const auto path = root / file.path;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << file.text;
    if (!out) {
      std::cerr << "cannot write " << path << "\n";
      return 1;
    }
  }
  return 0;
}
