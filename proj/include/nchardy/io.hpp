#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nchardy/errors.hpp"
#include "nchardy/evaluate.hpp"
#include "nchardy/kernels.hpp"
#include "nchardy/series.hpp"

namespace nchardy {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Schema violation; path is a JSONPath-like locator such as $.coeffs[2].matrix[0][1].
class ParseError : public Error {
 public:
  ParseError(const std::string& path, const std::string& what) : Error(path + ": " + what), path(path) {}
  std::string path;
};

// Complex numbers are [re, im]; matrices are row arrays of complex numbers.
OrderedJson complex_to_json(Complex c);
OrderedJson matrix_to_json(const CMatrix& m);
OrderedJson vector_to_json(const CVector& v);
Complex complex_from_json(const Json& j, const std::string& path);
CMatrix matrix_from_json(const Json& j, const std::string& path);
CVector vector_from_json(const Json& j, const std::string& path);

// {"d", "rows", "cols", "max_degree", "coeffs": [{"word", "matrix"}]}, coefficients in degree-lex order.
OrderedJson series_to_json(const Series& f);
Series series_from_json(const Json& j, const std::string& path = "$");

// {"d", "n", "Z": [matrix...]}
OrderedJson point_to_json(const NcPoint& z);
NcPoint point_from_json(const Json& j, const std::string& path = "$");

// {"Z": point, "y": vector}
OrderedJson pair_to_json(const SingularityPair& p);
SingularityPair pair_from_json(const Json& j, const std::string& path = "$");

// A pairs file holds a single pair object or an array of them.
std::vector<SingularityPair> pairs_from_json(const Json& j, const std::string& path = "$");

// Parse errors report the byte offset under path "$".
Json read_json_file(const std::string& file);

}  // namespace nchardy
