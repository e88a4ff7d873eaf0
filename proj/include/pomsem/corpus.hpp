#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pomsem/lang.hpp"

namespace pomsem {

struct CorpusOptions {
  std::vector<std::string> vars{"x", "y"};
  int max_const = 2;
  std::size_t max_nodes = 12;  // AST nodes, see ast_size
  std::size_t max_loops = 1;
  bool par = true;
  bool flip = true;
  bool loops = true;
  bool ifs = true;
};

CmdPtr random_program(std::mt19937_64& rng, const CorpusOptions& opts);

/// `count` distinct programs (by printed form) from a fixed seed.
std::vector<CmdPtr> generate_corpus(std::uint64_t seed, std::size_t count, const CorpusOptions& opts);

}  // namespace pomsem
