#include "cole/payoff_matrix.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "cole/errors.hpp"
#include "cole/numeric_io.hpp"

namespace cole {

namespace {

void check_finite(double v) {
  if (!std::isfinite(v)) throw InvalidParameterError("payoff entry not finite");
}

}  // namespace

PayoffMatrix::PayoffMatrix(int n, std::vector<double> row_major)
    : n_(n), w_(std::move(row_major)) {
  if (n < 1) throw InvalidParameterError("payoff matrix needs n >= 1");
  if (w_.size() != static_cast<std::size_t>(n) * n) {
    throw DimensionMismatchError("payoff data size does not match n*n");
  }
  for (double v : w_) check_finite(v);
}

PayoffMatrix PayoffMatrix::zeros(int n) {
  return PayoffMatrix(n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0));
}

void PayoffMatrix::set(int i, int j, double value) {
  check_finite(value);
  w_[static_cast<std::size_t>(i) * n_ + j] = value;
}

PayoffMatrix PayoffMatrix::prefix(int k) const {
  if (k < 1 || k > n_) throw OutOfRangeError("prefix length out of range");
  std::vector<double> sub(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub[static_cast<std::size_t>(i) * k + j] = at(i, j);
  return PayoffMatrix(k, std::move(sub));
}

int PayoffMatrix::grow() {
  const int m = n_ + 1;
  std::vector<double> next(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) next[static_cast<std::size_t>(i) * m + j] = at(i, j);
  w_ = std::move(next);
  n_ = m;
  return n_ - 1;
}

void PayoffMatrix::remove(int idx) {
  if (idx < 0 || idx >= n_) throw OutOfRangeError("remove index out of range");
  const int m = n_ - 1;
  std::vector<double> next(static_cast<std::size_t>(m) * m);
  for (int i = 0, r = 0; i < n_; ++i) {
    if (i == idx) continue;
    for (int j = 0, c = 0; j < n_; ++j) {
      if (j == idx) continue;
      next[static_cast<std::size_t>(r) * m + c] = at(i, j);
      ++c;
    }
    ++r;
  }
  w_ = std::move(next);
  n_ = m;
}

bool PayoffMatrix::is_symmetric(double tol) const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (std::fabs(at(i, j) - at(j, i)) > tol) return false;
  return true;
}

std::string PayoffMatrix::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const unsigned char* p, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t dim = static_cast<std::uint64_t>(n_);
  mix(reinterpret_cast<const unsigned char*>(&dim), sizeof(dim));
  mix(reinterpret_cast<const unsigned char*>(w_.data()), w_.size() * sizeof(double));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string PayoffMatrix::to_csv() const {
  std::string out = "n=" + std::to_string(n_) + "\n";
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (j > 0) out += ',';
      out += format_double(at(i, j));
    }
    out += '\n';
  }
  return out;
}

PayoffMatrix PayoffMatrix::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty payoff CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("n=", 0) != 0) throw ParseError("payoff CSV must start with n=<count>");
  const long n = parse_long(std::string_view(line).substr(2));
  if (n < 1) throw ParseError("payoff CSV: n must be >= 1");
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(n) * n);
  for (long i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ParseError("payoff CSV: missing row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = 0;
    long fields = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      std::string_view field(line.data() + start,
                             (comma == std::string::npos ? line.size() : comma) - start);
      w.push_back(parse_double(field));
      ++fields;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields != n) throw ParseError("payoff CSV: wrong field count in row");
  }
  return PayoffMatrix(static_cast<int>(n), std::move(w));
}

std::string PayoffMatrix::to_json_string() const {
  nlohmann::json j;
  j["n"] = n_;
  j["w"] = w_;
  return j.dump();
}

PayoffMatrix PayoffMatrix::from_json_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("n") || !j.contains("w")) {
    throw ParseError("bad payoff JSON");
  }
  return PayoffMatrix(j.at("n").get<int>(), j.at("w").get<std::vector<double>>());
}

}  // namespace cole
