#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tropdiv/common.hpp"

namespace tropdiv {

// Feature matrix plus binary labels. Image features are scaled to [0, 1].
struct Dataset {
  Eigen::MatrixXd features;  // n x d
  Eigen::VectorXi labels;    // n, entries in {0, 1}

  int size() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }

  void validate() const {
    if (features.rows() != labels.size())
      throw input_error("Dataset: feature/label count mismatch");
    if (features.rows() < 1) throw input_error("Dataset: empty");
    if (!features.allFinite()) throw input_error("Dataset: missing values");
    for (int i = 0; i < labels.size(); ++i)
      if (labels[i] != 0 && labels[i] != 1)
        throw input_error("Dataset: labels must be binary");
  }

  Dataset head(int n) const {
    Dataset out;
    n = std::min(n, size());
    out.features = features.topRows(n);
    out.labels = labels.head(n);
    return out;
  }
};

namespace detail {

inline std::uint32_t read_be_u32(std::istream& in, const char* what) {
  unsigned char buf[4];
  if (!in.read(reinterpret_cast<char*>(buf), 4))
    throw parse_error(std::string("idx: truncated file reading ") + what);
  return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
         (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

}  // namespace detail

// Reads an IDX image/label file pair (big-endian, magic 0x00000803 for
// images and 0x00000801 for labels). With a digit pair (a, b) the samples
// are filtered to those two classes and relabeled a -> 0, b -> 1; without
// one, every sample is kept and relabeled even -> 0, odd -> 1.
inline Dataset load_idx(const std::string& images_path,
                        const std::string& labels_path,
                        std::optional<std::pair<int, int>> filter = {}) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw parse_error("idx: cannot open " + images_path);
  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw parse_error("idx: cannot open " + labels_path);

  const std::uint32_t img_magic = detail::read_be_u32(img, "image magic");
  if (img_magic != 0x00000803)
    throw parse_error("idx: bad image magic (expected 0x00000803)");
  const std::uint32_t n_img = detail::read_be_u32(img, "image count");
  const std::uint32_t rows = detail::read_be_u32(img, "row count");
  const std::uint32_t cols = detail::read_be_u32(img, "column count");

  const std::uint32_t lab_magic = detail::read_be_u32(lab, "label magic");
  if (lab_magic != 0x00000801)
    throw parse_error("idx: bad label magic (expected 0x00000801)");
  const std::uint32_t n_lab = detail::read_be_u32(lab, "label count");
  if (n_img != n_lab) throw parse_error("idx: image/label count mismatch");

  const std::size_t pixels = std::size_t(rows) * cols;
  std::vector<unsigned char> raw(pixels);
  std::vector<Eigen::VectorXd> feats;
  std::vector<int> labels;
  for (std::uint32_t i = 0; i < n_img; ++i) {
    if (!img.read(reinterpret_cast<char*>(raw.data()), pixels))
      throw parse_error("idx: truncated image data");
    char lc;
    if (!lab.read(&lc, 1)) throw parse_error("idx: truncated label data");
    const int digit = static_cast<unsigned char>(lc);
    int label;
    if (filter) {
      if (digit == filter->first)
        label = 0;
      else if (digit == filter->second)
        label = 1;
      else
        continue;
    } else {
      label = digit % 2;  // even -> 0, odd -> 1
    }
    Eigen::VectorXd x(pixels);
    for (std::size_t px = 0; px < pixels; ++px) x[px] = raw[px] / 255.0;
    feats.push_back(std::move(x));
    labels.push_back(label);
  }
  if (feats.empty()) throw parse_error("idx: no samples after filtering");
  Dataset out;
  out.features.resize(feats.size(), pixels);
  out.labels.resize(feats.size());
  for (std::size_t i = 0; i < feats.size(); ++i) {
    out.features.row(i) = feats[i];
    out.labels[i] = labels[i];
  }
  out.validate();
  return out;
}

// CSV with a header line, label in the first column, features after.
inline Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw parse_error("csv: missing header");
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t width = 0;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw parse_error("csv: bad number '" + cell + "' at line " +
                          std::to_string(lineno));
      }
    }
    if (vals.size() < 2)
      throw parse_error("csv: too few columns at line " +
                        std::to_string(lineno));
    if (width == 0) width = vals.size();
    if (vals.size() != width)
      throw parse_error("csv: ragged row at line " + std::to_string(lineno));
    const double l = vals.front();
    if (l != 0.0 && l != 1.0)
      throw parse_error("csv: label must be 0 or 1 at line " +
                        std::to_string(lineno));
    labels.push_back(static_cast<int>(l));
    rows.push_back({vals.begin() + 1, vals.end()});
  }
  if (rows.empty()) throw parse_error("csv: no data rows");
  Dataset out;
  out.features.resize(rows.size(), width - 1);
  out.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k + 1 < width; ++k) out.features(i, k) = rows[i][k];
    out.labels[i] = labels[i];
  }
  out.validate();
  return out;
}

// Two isotropic Gaussian classes centered at -sep/2 and +sep/2 on the first
// axis; class 0 first, then class 1.
inline Dataset synth_gaussians(int n, int d, double separation,
                               std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw input_error("synth_gaussians: n must be even");
  if (d < 1) throw input_error("synth_gaussians: d must be positive");
  Rng rng(seed);
  Dataset out;
  out.features.resize(n, d);
  out.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    const int label = i < n / 2 ? 0 : 1;
    const double center = (label == 0 ? -0.5 : 0.5) * separation;
    for (int k = 0; k < d; ++k)
      out.features(i, k) = rng.gaussian() + (k == 0 ? center : 0.0);
    out.labels[i] = label;
  }
  return out;
}

}  // namespace tropdiv
