#pragma once

#include <span>
#include <string>
#include <vector>

#include "semtensor/tensor.h"

namespace semtensor {

// Row-major dense matrix; one row per vocabulary entry.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool AllFinite() const;
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// One d-dimensional vector per vocabulary entry of every mode of a schema.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  EmbeddingSet(ModeSchema schema, std::size_t dim);

  const ModeSchema& schema() const { return schema_; }
  std::size_t dim() const { return dim_; }
  std::size_t num_modes() const { return vectors_.size(); }

  Matrix& mode(std::size_t m) { return vectors_.at(m); }
  const Matrix& mode(std::size_t m) const { return vectors_.at(m); }

  std::span<double> vec(std::size_t m, Id id) { return vectors_[m].row(id); }
  std::span<const double> vec(std::size_t m, Id id) const { return vectors_[m].row(id); }

  bool AllFinite() const;
  friend bool operator==(const EmbeddingSet&, const EmbeddingSet&) = default;

 private:
  ModeSchema schema_;
  std::size_t dim_ = 0;
  std::vector<Matrix> vectors_;
};

// Labelled vectors of one mode as read from an embedding file.
struct WordVectors {
  std::vector<std::string> labels;
  Matrix vectors;

  std::int64_t Find(std::string_view label) const;
};

WordVectors ModeVectors(const EmbeddingSet& embeddings, std::size_t mode);

// "N d" header, then "label v_1 ... v_d" per entry in id order.
std::string FormatWordVectors(const WordVectors& vectors);
void WriteWordVectors(const WordVectors& vectors, const std::string& path);
WordVectors ReadWordVectors(const std::string& path);

}  // namespace semtensor
