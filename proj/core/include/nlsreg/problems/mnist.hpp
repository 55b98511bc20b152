#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsreg/problems/svm.hpp"

namespace nlsreg::problems {

/// Malformed IDX input; `offset()` is the byte position where parsing failed.
class IdxParseError : public std::runtime_error {
 public:
  IdxParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct IdxImages {
  std::size_t count = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  /// count * rows * cols bytes, image-major.
  std::vector<std::uint8_t> pixels;
};

IdxImages parse_idx_images(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> parse_idx_labels(const std::vector<std::uint8_t>& bytes);

IdxImages read_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);

/// Keeps digits 1 and 7, scales pixels to [0, 1] and maps 1 -> +1, 7 -> -1.
LabeledData select_ones_and_sevens(const IdxImages& images, const std::vector<std::uint8_t>& labels);

/// Reads train-images-idx3-ubyte, train-labels-idx1-ubyte and the t10k pair
/// from `dir`.
SvmInstance load_mnist_idx(const std::filesystem::path& dir);

}  // namespace nlsreg::problems
