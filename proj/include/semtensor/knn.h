#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "semtensor/embeddings.h"

namespace semtensor {

struct Neighbor {
  std::string word;
  double similarity = 0.0;
};

// Top-k entries by cosine similarity to `query`, excluding the query itself
// and zero-norm vectors; ties broken lexicographically. Requires
// k < vocabulary size; an unknown query is an eval error naming the word.
std::vector<Neighbor> NearestNeighbors(const WordVectors& vectors, std::string_view query,
                                       std::size_t k = 10);

}  // namespace semtensor
