#pragma once

// Dense real square matrices standing in for finite-rank compact operators.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace orlicz {

class Matrix {
 public:
  Matrix() : Matrix(1) {}

  explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
    if (dim == 0) throw std::invalid_argument("Matrix: dimension must be >= 1");
  }

  Matrix(std::size_t dim, std::vector<double> row_major) : dim_(dim), data_(std::move(row_major)) {
    if (dim == 0) throw std::invalid_argument("Matrix: dimension must be >= 1");
    if (data_.size() != dim * dim) throw std::invalid_argument("Matrix: entry count does not match dim*dim");
    for (double x : data_)
      if (!std::isfinite(x)) throw std::invalid_argument("Matrix: entries must be finite");
  }

  Matrix(std::initializer_list<std::initializer_list<double>> rows) : Matrix(rows.size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != dim_) throw std::invalid_argument("Matrix: ragged initializer");
      std::size_t j = 0;
      for (double x : row) {
        if (!std::isfinite(x)) throw std::invalid_argument("Matrix: entries must be finite");
        (*this)(i, j++) = x;
      }
      ++i;
    }
  }

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static Matrix diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
  }

  std::size_t dim() const { return dim_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  std::span<const double> data() const { return data_; }

  bool is_zero() const {
    for (double x : data_)
      if (x != 0.0) return false;
    return true;
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

namespace detail {
inline void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  if (a.dim() != b.dim())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()) + ")");
}
}  // namespace detail

inline Matrix add(const Matrix& a, const Matrix& b) {
  detail::require_same_dim(a, b, "add");
  Matrix r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

inline Matrix sub(const Matrix& a, const Matrix& b) {
  detail::require_same_dim(a, b, "sub");
  Matrix r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

inline Matrix scale(double c, const Matrix& a) {
  Matrix r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) r(i, j) = c * a(i, j);
  return r;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  detail::require_same_dim(a, b, "matmul");
  const std::size_t n = a.dim();
  Matrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

/// Transpose; the adjoint for real scalars.
inline Matrix adjoint(const Matrix& a) {
  Matrix r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) r(j, i) = a(i, j);
  return r;
}

inline Matrix operator+(const Matrix& a, const Matrix& b) { return add(a, b); }
inline Matrix operator-(const Matrix& a, const Matrix& b) { return sub(a, b); }
inline Matrix operator-(const Matrix& a) { return scale(-1.0, a); }
inline Matrix operator*(const Matrix& a, const Matrix& b) { return matmul(a, b); }
inline Matrix operator*(double c, const Matrix& a) { return scale(c, a); }

// ---------------------------------------------------------------------------
// I/O: CSV (rows of comma-separated reals) and {"dim": n, "entries": [[...]]}.

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Matrix matrix_from_json(const nlohmann::json& j) {
  try {
    const auto dim = j.at("dim").get<std::size_t>();
    const auto& rows = j.at("entries");
    if (!rows.is_array() || rows.size() != dim) throw ParseError("matrix json: entries must have dim rows");
    std::vector<double> data;
    data.reserve(dim * dim);
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != dim) throw ParseError("matrix json: each row must have dim entries");
      for (const auto& x : row) {
        if (!x.is_number()) throw ParseError("matrix json: non-numeric entry");
        data.push_back(x.get<double>());
      }
    }
    return Matrix(dim, std::move(data));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("matrix json: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("matrix json: ") + e.what());
  }
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return {{"dim", m.dim()}, {"entries", std::move(rows)}};
}

inline Matrix matrix_from_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ParseError("matrix csv: bad number '" + cell + "'");
      }
      if (cell.find_first_not_of(" \t", used) != std::string::npos)
        throw ParseError("matrix csv: trailing characters in '" + cell + "'");
      row.push_back(x);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix csv: no rows");
  const std::size_t n = rows.size();
  std::vector<double> data;
  for (const auto& r : rows) {
    if (r.size() != n) throw ParseError("matrix csv: matrix must be square");
    data.insert(data.end(), r.begin(), r.end());
  }
  try {
    return Matrix(n, std::move(data));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("matrix csv: ") + e.what());
  }
}

/// Reads a matrix file; JSON when the first non-blank character is '{'.
inline Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return matrix_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("matrix json: ") + e.what());
    }
  }
  std::istringstream is(text);
  return matrix_from_csv(is);
}

}  // namespace orlicz
