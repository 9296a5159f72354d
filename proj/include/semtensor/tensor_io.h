#pragma once

#include <iosfwd>
#include <string>

#include "semtensor/tensor.h"

namespace semtensor {

inline constexpr int kTensorFormatVersion = 1;

// Canonical text form: identical tensors serialize to identical bytes.
void WriteTensor(const SparseCountTensor& tensor, std::ostream& out);
SparseCountTensor ReadTensor(std::istream& in);

void SaveTensor(const SparseCountTensor& tensor, const std::string& path);
SparseCountTensor LoadTensor(const std::string& path);

}  // namespace semtensor
