#include "semtensor/tensor_io.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "semtensor/error.h"
#include "semtensor/text_util.h"

namespace semtensor {

namespace {

constexpr std::string_view kMagic = "semtensor-tensor";

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string Next(std::string_view what) {
    std::string line;
    if (!std::getline(in_, line)) Fail("unexpected end of file, expected " + std::string(what));
    ++line_;
    return line;
  }

  [[noreturn]] void Fail(const std::string& message) const {
    throw Error(ErrorCategory::kFormat,
                "tensor file line " + std::to_string(line_) + ": " + message);
  }

  std::int64_t Int(std::string_view field) const {
    std::int64_t v;
    if (!text::ParseInt(field, &v)) Fail("bad integer '" + std::string(field) + "'");
    return v;
  }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

}  // namespace

void WriteTensor(const SparseCountTensor& tensor, std::ostream& out) {
  const ModeSchema& schema = tensor.schema();
  out << kMagic << '\t' << kTensorFormatVersion << '\n';
  out << "modes\t" << schema.size() << '\n';
  for (const auto& mode : schema.modes()) {
    out << "mode\t" << text::EscapeLabel(mode.name) << '\t' << RoleName(mode.role) << '\t'
        << mode.vocab.size() << '\t' << mode.vocab.threshold() << '\n';
    for (std::size_t id = 0; id < mode.vocab.size(); ++id) {
      out << text::EscapeLabel(mode.vocab.Label(id)) << '\t' << mode.vocab.Count(id) << '\n';
    }
  }
  out << "cells\t" << tensor.nnz() << '\n';
  for (std::size_t k = 0; k < tensor.nnz(); ++k) {
    for (Id id : tensor.cell(k)) out << id << '\t';
    out << text::FormatDouble(tensor.count(k)) << '\n';
  }
}

SparseCountTensor ReadTensor(std::istream& in) {
  LineReader reader(in);
  {
    const std::string header_text = reader.Next("header");
    const auto header = text::Split(header_text, '\t');
    if (header.size() != 2 || header[0] != kMagic) reader.Fail("not a semtensor tensor file");
    if (header[1] != std::to_string(kTensorFormatVersion)) {
      reader.Fail("unsupported tensor format version '" + std::string(header[1]) +
                  "' (expected " + std::to_string(kTensorFormatVersion) + ")");
    }
  }
  const std::string modes_line_text = reader.Next("mode count");
  const auto modes_line = text::Split(modes_line_text, '\t');
  if (modes_line.size() != 2 || modes_line[0] != "modes") reader.Fail("expected 'modes <n>'");
  const std::int64_t num_modes = reader.Int(modes_line[1]);
  if (num_modes < 2) reader.Fail("a tensor needs at least two modes");

  std::vector<Mode> modes;
  for (std::int64_t m = 0; m < num_modes; ++m) {
    const std::string f_text = reader.Next("mode header");
    const auto f = text::Split(f_text, '\t');
    if (f.size() != 5 || f[0] != "mode") reader.Fail("expected 'mode name role size threshold'");
    const auto role = ParseRoleName(f[2]);
    if (!role) reader.Fail("unknown role '" + std::string(f[2]) + "'");
    const std::int64_t size = reader.Int(f[3]);
    const std::int64_t threshold = reader.Int(f[4]);
    if (size < 0) reader.Fail("negative vocabulary size");
    std::vector<std::string> labels;
    std::vector<std::int64_t> counts;
    for (std::int64_t i = 0; i < size; ++i) {
      const std::string e_text = reader.Next("vocabulary entry");
      const auto e = text::Split(e_text, '\t');
      if (e.size() != 2) reader.Fail("expected 'label count'");
      labels.push_back(text::UnescapeLabel(e[0]));
      counts.push_back(reader.Int(e[1]));
    }
    modes.push_back({text::UnescapeLabel(f[1]), *role,
                     Vocabulary::FromEntries(std::move(labels), std::move(counts), threshold)});
  }
  ModeSchema schema(std::move(modes));

  const std::string cells_line_text = reader.Next("cell count");
  const auto cells_line = text::Split(cells_line_text, '\t');
  if (cells_line.size() != 2 || cells_line[0] != "cells") reader.Fail("expected 'cells <n>'");
  const std::int64_t nnz = reader.Int(cells_line[1]);
  TensorBuilder builder(schema);
  std::vector<Id> ids(schema.size());
  for (std::int64_t k = 0; k < nnz; ++k) {
    const std::string f_text = reader.Next("cell");
    const auto f = text::Split(f_text, '\t');
    if (f.size() != schema.size() + 1) reader.Fail("cell has wrong number of fields");
    for (std::size_t m = 0; m < schema.size(); ++m) {
      const std::int64_t id = reader.Int(f[m]);
      if (id < 0 || static_cast<std::size_t>(id) >= schema.mode(m).vocab.size()) {
        reader.Fail("id out of range for mode " + schema.mode(m).name);
      }
      ids[m] = static_cast<Id>(id);
    }
    double count;
    if (!text::ParseDouble(f.back(), &count) || !(count > 0.0)) {
      reader.Fail("cell count must be a positive number");
    }
    builder.Add(ids, count);
  }
  SparseCountTensor tensor = builder.Build();
  if (static_cast<std::int64_t>(tensor.nnz()) != nnz) reader.Fail("duplicate cells");
  return tensor;
}

void SaveTensor(const SparseCountTensor& tensor, const std::string& path) {
  std::ostringstream out;
  WriteTensor(tensor, out);
  text::WriteFile(path, out.str());
}

SparseCountTensor LoadTensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open tensor file: " + path);
  return ReadTensor(in);
}

}  // namespace semtensor
