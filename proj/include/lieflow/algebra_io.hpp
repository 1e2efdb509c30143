#pragma once

// Text formats.
//
// Algebra file (one directive per line, '#' starts a comment):
//   dim <n>
//   labels <l_0> ... <l_{n-1}>         optional
//   c <i> <j> <k> <value>              c_ij^k; c_ji^k is filled in as -value
//   size <m>                           optional matrix basis, m x m
//   m <i> <row> <col> <value>          entry of the matrix of e_i
//
// Matrix file: whitespace-separated rows, one row per line.

#include <lieflow/algebra.hpp>
#include <lieflow/errors.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace lieflow {

struct AlgebraFile {
  LieAlgebra algebra;
  std::vector<Mat> matrix_basis;  // empty unless a size directive was given
};

namespace detail {

inline std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline AlgebraFile parse_algebra(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0, dim = -1, size = 0;
  std::vector<std::string> labels;
  StructureConstants sc;
  std::vector<Mat> basis;
  auto fail = [&](const std::string& msg) { throw InputError("line " + std::to_string(lineno) + ": " + msg); };
  auto index = [&](int i) {
    if (dim < 0) fail("'dim' must come first");
    if (i < 0 || i >= dim) fail("basis index " + std::to_string(i) + " out of range");
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(detail::strip_comment(line));
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "dim") {
      if (dim >= 0) fail("duplicate 'dim'");
      if (!(ls >> dim) || dim < 1) fail("'dim' needs a positive integer");
      sc = StructureConstants(dim);
    } else if (key == "labels") {
      std::string l;
      while (ls >> l) labels.push_back(l);
    } else if (key == "c") {
      int i, j, k;
      double v;
      if (!(ls >> i >> j >> k >> v)) fail("'c' needs i j k value");
      index(i);
      index(j);
      index(k);
      if (i == j && v != 0.0) fail("c_ii^k must vanish");
      const double prev = sc(i, j, k);
      if (prev != 0.0 && prev != v) fail("conflicting value for c_" + std::to_string(i) + std::to_string(j) + "^" + std::to_string(k));
      sc.set_bracket(i, j, k, v);
    } else if (key == "size") {
      if (dim < 0) fail("'dim' must come first");
      if (!(ls >> size) || size < 1) fail("'size' needs a positive integer");
      basis.assign(dim, Mat::Zero(size, size));
    } else if (key == "m") {
      int i, r, c;
      double v;
      if (!(ls >> i >> r >> c >> v)) fail("'m' needs i row col value");
      if (size == 0) fail("'size' must precede matrix entries");
      index(i);
      if (r < 0 || r >= size || c < 0 || c >= size) fail("matrix entry out of range");
      basis[i](r, c) = v;
    } else {
      fail("unknown directive '" + key + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing token '" + extra + "'");
  }
  if (dim < 0) throw InputError("algebra file has no 'dim'");
  if (!labels.empty() && static_cast<int>(labels.size()) != dim) throw InputError("label count does not match dim");
  return {LieAlgebra(sc, labels), basis};
}

inline AlgebraFile load_algebra(const std::string& path) { return parse_algebra(detail::read_text(path)); }

inline Mat parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::istringstream ls(detail::strip_comment(line));
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw InputError("");
      } catch (const std::exception&) {
        throw InputError("matrix entry '" + tok + "' is not a number");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("matrix file is empty");
  Mat m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size()) throw InputError("matrix rows have unequal length");
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

inline Mat load_matrix(const std::string& path) { return parse_matrix(detail::read_text(path)); }

}  // namespace lieflow
