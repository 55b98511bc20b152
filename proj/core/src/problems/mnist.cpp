#include "nlsreg/problems/mnist.hpp"

#include <fstream>
#include <iterator>

namespace nlsreg::problems {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes, std::size_t offset) {
  if (offset + 4 > bytes.size()) throw IdxParseError("truncated header", bytes.size());
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

IdxParseError::IdxParseError(const std::string& what, std::size_t offset)
    : std::runtime_error("IDX parse error at byte " + std::to_string(offset) + ": " + what),
      offset_(offset) {}

IdxImages parse_idx_images(const std::vector<std::uint8_t>& bytes) {
  if (read_be32(bytes, 0) != kImageMagic) throw IdxParseError("bad image magic number", 0);
  IdxImages out;
  out.count = read_be32(bytes, 4);
  out.rows = read_be32(bytes, 8);
  out.cols = read_be32(bytes, 12);
  if (out.rows > 4096 || out.cols > 4096) throw IdxParseError("implausible image size", 8);
  const std::size_t need = out.count * out.rows * out.cols;
  if (bytes.size() - 16 < need) throw IdxParseError("truncated image data", bytes.size());
  out.pixels.assign(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(need));
  return out;
}

std::vector<std::uint8_t> parse_idx_labels(const std::vector<std::uint8_t>& bytes) {
  if (read_be32(bytes, 0) != kLabelMagic) throw IdxParseError("bad label magic number", 0);
  const std::size_t count = read_be32(bytes, 4);
  if (bytes.size() - 8 < count) throw IdxParseError("truncated label data", bytes.size());
  return {bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(count)};
}

IdxImages read_idx_images(const std::filesystem::path& path) {
  return parse_idx_images(slurp(path));
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
  return parse_idx_labels(slurp(path));
}

LabeledData select_ones_and_sevens(const IdxImages& images,
                                   const std::vector<std::uint8_t>& labels) {
  if (labels.size() != images.count)
    throw std::invalid_argument("mnist: image and label counts differ");
  const std::size_t dim = images.rows * images.cols;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == 1 || labels[i] == 7) keep.push_back(i);

  LabeledData out;
  out.features.resize(static_cast<Index>(keep.size()), static_cast<Index>(dim));
  out.labels.resize(static_cast<Index>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const std::size_t i = keep[r];
    const auto row = static_cast<Index>(r);
    out.labels(row) = labels[i] == 1 ? 1.0 : -1.0;
    for (std::size_t j = 0; j < dim; ++j)
      out.features(row, static_cast<Index>(j)) = images.pixels[i * dim + j] / 255.0;
  }
  return out;
}

SvmInstance load_mnist_idx(const std::filesystem::path& dir) {
  SvmInstance inst;
  inst.train = select_ones_and_sevens(read_idx_images(dir / "train-images-idx3-ubyte"),
                                      read_idx_labels(dir / "train-labels-idx1-ubyte"));
  inst.test = select_ones_and_sevens(read_idx_images(dir / "t10k-images-idx3-ubyte"),
                                     read_idx_labels(dir / "t10k-labels-idx1-ubyte"));
  return inst;
}

}  // namespace nlsreg::problems
