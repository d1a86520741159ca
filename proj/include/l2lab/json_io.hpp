#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "l2lab/complexes.hpp"
#include "l2lab/gr_matrix.hpp"

namespace l2lab {

using Json = nlohmann::ordered_json;

// Parsers accept the file formats described in the README. All coefficients
// are rational pairs, so parsing always produces exact values; float runs
// convert afterwards. Structural problems raise ValidationError with the
// offending location in the message.

Group parse_group(const Json& j);
GroupElement parse_word(const Group& g, const Json& j);
RElem<ExactC> parse_terms(const Group& g, const Json& j);
GRMat<ExactC> parse_matrix(const Json& j, const Group* fallback_group = nullptr);
ChainComplex<ExactC> parse_complex(const Json& j);
std::vector<Cell> parse_cells(const Json& j);

Json group_json(const Group& g);
Json word_json(const Group& g, const GroupElement& e);
Json terms_json(const Group& g, const RElem<ExactC>& u);
Json matrix_json(const GRMat<ExactC>& m);

Json load_json_file(const std::string& path);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

// rationals serialize as "num/den" strings so exact reports stay exact
Json rational_json(const Rational& r);

}  // namespace l2lab
