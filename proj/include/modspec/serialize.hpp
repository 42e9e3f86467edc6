#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "modspec/diagonalize.hpp"
#include "modspec/harper.hpp"
#include "modspec/weak_diag.hpp"

namespace modspec {

using Json = nlohmann::json;

/// Shortest form is not used: every double is written with 17 significant
/// digits, '.' decimal point, independent of the C locale.
std::string format_double(double v);

/// Deterministic pretty printer (sorted keys, 17-digit doubles, inline numeric arrays).
std::string dump_json(const Json& j);

/// Throws ParseError carrying the byte offset of the failure.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json to_json(const AlgebraShape& s);
Json to_json(const Matrix& m);
Json to_json(const AlgebraElement& a);
Json to_json(const ModuleVector& x);
Json to_json(const ModuleOperator& k);
Json to_json(const Diagonalization& d);
Json to_json(const IterationTrace& t);
Json to_json(const SelectionReport& r, const OperatorField& field);
Json to_json(const MatchReport& r);

AlgebraShape shape_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
AlgebraElement element_from_json(const Json& j);
ModuleVector vector_from_json(const Json& j);
/// Rechecks the advisory "hermitian" flag; a false claim raises NotHermitian.
ModuleOperator operator_from_json(const Json& j);
Diagonalization diagonalization_from_json(const Json& j);

/// `alpha,epsilon` rows at every cumulative-weight breakpoint and the midpoints
/// between consecutive breakpoints, increasing in alpha.
std::string scale_csv(const SpectralScale& scale);
/// `k1,k2,band_index,value` in row-major grid order, bands 0-based descending.
std::string bands_csv(const OperatorField& field, const BandSystem& bands);
/// `p,q,value`.
std::string butterfly_csv(const std::vector<ButterflyRow>& rows);

}  // namespace modspec
