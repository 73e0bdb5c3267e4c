#include "nchardy/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace nchardy {

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expectObject(const Json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ParseError(at(path, key), "unknown key");
  for (const auto& key : allowed)
    if (!j.contains(key)) throw ParseError(at(path, key), "missing key");
}

const Json& expectArray(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

int intField(const Json& j, const std::string& key, const std::string& path, int lo) {
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw ParseError(at(path, key), "expected an integer");
  const auto x = v.get<long long>();
  if (x < lo || x > 1'000'000) throw ParseError(at(path, key), "value " + std::to_string(x) + " out of range");
  return static_cast<int>(x);
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

}  // namespace

OrderedJson complex_to_json(Complex c) { return OrderedJson::array({c.real(), c.imag()}); }

OrderedJson matrix_to_json(const CMatrix& m) {
  OrderedJson rows = OrderedJson::array();
  for (Index i = 0; i < m.rows(); ++i) {
    OrderedJson row = OrderedJson::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

OrderedJson vector_to_json(const CVector& v) {
  OrderedJson out = OrderedJson::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

Complex complex_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ParseError(path, "expected [re, im]");
  return {number(j[0], at(path, 0)), number(j[1], at(path, 1))};
}

CMatrix matrix_from_json(const Json& j, const std::string& path) {
  expectArray(j, path);
  if (j.empty()) throw ParseError(path, "empty matrix");
  const std::size_t cols = expectArray(j[0], at(path, 0)).size();
  if (cols == 0) throw ParseError(at(path, 0), "empty row");
  CMatrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& row = expectArray(j[i], at(path, i));
    if (row.size() != cols) throw ParseError(at(path, i), "ragged row: " + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Index>(i), static_cast<Index>(k)) = complex_from_json(row[k], at(at(path, i), k));
  }
  return m;
}

CVector vector_from_json(const Json& j, const std::string& path) {
  expectArray(j, path);
  if (j.empty()) throw ParseError(path, "empty vector");
  CVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i], at(path, i));
  return v;
}

OrderedJson series_to_json(const Series& f) {
  OrderedJson out;
  out["d"] = f.alphabet();
  out["rows"] = f.rows();
  out["cols"] = f.cols();
  out["max_degree"] = f.maxDegree();
  OrderedJson coeffs = OrderedJson::array();
  // The coefficient map is ordered degree-then-lex already.
  for (const auto& [w, m] : f.coeffs()) {
    OrderedJson c;
    c["word"] = w.letters();
    c["matrix"] = matrix_to_json(m);
    coeffs.push_back(std::move(c));
  }
  out["coeffs"] = std::move(coeffs);
  return out;
}

Series series_from_json(const Json& j, const std::string& path) {
  expectObject(j, path, {"d", "rows", "cols", "max_degree", "coeffs"});
  const int d = intField(j, "d", path, 1);
  const int rows = intField(j, "rows", path, 1);
  const int cols = intField(j, "cols", path, 1);
  const int n = intField(j, "max_degree", path, 0);
  Series f(d, rows, cols, n);
  const std::string cpath = at(path, "coeffs");
  const Json& coeffs = expectArray(j.at("coeffs"), cpath);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const std::string ip = at(cpath, i);
    expectObject(coeffs[i], ip, {"word", "matrix"});
    const Json& wj = expectArray(coeffs[i].at("word"), at(ip, "word"));
    std::vector<int> letters;
    for (std::size_t k = 0; k < wj.size(); ++k) {
      const std::string lp = at(at(ip, "word"), k);
      if (!wj[k].is_number_integer()) throw ParseError(lp, "expected an integer letter");
      const auto l = wj[k].get<long long>();
      if (l < 1 || l > d) throw ParseError(lp, "letter " + std::to_string(l) + " outside [1, " + std::to_string(d) + "]");
      letters.push_back(static_cast<int>(l));
    }
    if (static_cast<int>(letters.size()) > n)
      throw ParseError(at(ip, "word"), "word length " + std::to_string(letters.size()) + " exceeds max_degree " + std::to_string(n));
    Word w(d, std::move(letters));
    if (f.coeffs().count(w)) throw ParseError(at(ip, "word"), "duplicate word " + w.str());
    CMatrix m = matrix_from_json(coeffs[i].at("matrix"), at(ip, "matrix"));
    if (m.rows() != rows || m.cols() != cols)
      throw ParseError(at(ip, "matrix"), "shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                             " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
    f.set(w, m);
  }
  return f;
}

OrderedJson point_to_json(const NcPoint& z) {
  OrderedJson out;
  out["d"] = z.d;
  out["n"] = z.n;
  OrderedJson mats = OrderedJson::array();
  for (const auto& m : z.Z) mats.push_back(matrix_to_json(m));
  out["Z"] = std::move(mats);
  return out;
}

NcPoint point_from_json(const Json& j, const std::string& path) {
  expectObject(j, path, {"d", "n", "Z"});
  const int d = intField(j, "d", path, 1);
  const int n = intField(j, "n", path, 1);
  const std::string zp = at(path, "Z");
  const Json& zs = expectArray(j.at("Z"), zp);
  if (static_cast<int>(zs.size()) != d)
    throw ParseError(zp, std::to_string(zs.size()) + " matrices for d = " + std::to_string(d));
  std::vector<CMatrix> mats;
  for (std::size_t k = 0; k < zs.size(); ++k) {
    CMatrix m = matrix_from_json(zs[k], at(zp, k));
    if (m.rows() != n || m.cols() != n) throw ParseError(at(zp, k), "expected an n x n matrix with n = " + std::to_string(n));
    mats.push_back(std::move(m));
  }
  return NcPoint(std::move(mats));
}

OrderedJson pair_to_json(const SingularityPair& p) {
  OrderedJson out;
  out["Z"] = point_to_json(p.Z);
  out["y"] = vector_to_json(p.y);
  return out;
}

SingularityPair pair_from_json(const Json& j, const std::string& path) {
  expectObject(j, path, {"Z", "y"});
  SingularityPair p;
  p.Z = point_from_json(j.at("Z"), at(path, "Z"));
  p.y = vector_from_json(j.at("y"), at(path, "y"));
  if (p.y.size() != p.Z.n) throw ParseError(at(path, "y"), "length " + std::to_string(p.y.size()) + " does not match level " + std::to_string(p.Z.n));
  return p;
}

std::vector<SingularityPair> pairs_from_json(const Json& j, const std::string& path) {
  if (j.is_object()) return {pair_from_json(j, path)};
  expectArray(j, path);
  std::vector<SingularityPair> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(pair_from_json(j[i], at(path, i)));
  return out;
}

Json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("$", "cannot open " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ParseError("$", "malformed JSON in " + file + " at byte " + std::to_string(e.byte));
  }
}

}  // namespace nchardy
