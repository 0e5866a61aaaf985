// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <filesystem>

#include "tg/corpus.hh"

namespace tg {

// Versioned little-endian binary cache of a Corpus, written by `ingest` and
// `synth` and read by every other command.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus(const std::filesystem::path& path);

}  // namespace tg
