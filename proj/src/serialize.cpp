#include "modspec/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "modspec/error.hpp"

namespace modspec {

std::string format_double(double v) {
  if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "cannot serialize non-finite value");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

bool is_leaf(const Json& j) { return !j.is_array() && !j.is_object(); }

bool flat_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (!is_leaf(e) && !(e.is_array() && e.size() <= 2 && std::all_of(e.begin(), e.end(), is_leaf)))
      return false;
  return true;
}

void emit(const Json& j, std::ostringstream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case Json::value_t::number_float:
      out << format_double(j.get<double>());
      return;
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      if (flat_array(j)) {
        out << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out << ", ";
          emit(j[i], out, indent);
        }
        out << ']';
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out << inner;
        emit(j[i], out, indent + 2);
        out << (i + 1 < j.size() ? ",\n" : "\n");
      }
      out << pad << ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out << inner << Json(it.key()).dump() << ": ";
        emit(it.value(), out, indent + 2);
        out << (i + 1 < j.size() ? ",\n" : "\n");
      }
      out << pad << '}';
      return;
    }
    default:
      out << j.dump();
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorKind::ParseError, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <typename T>
T get(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string dump_json(const Json& j) {
  std::ostringstream out;
  emit(j, out, 0);
  out << '\n';
  return out.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError,
                "malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) { return parse_json(read_text_file(path)); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
}

Json to_json(const AlgebraShape& s) {
  Json weights = Json::array();
  for (double w : s.weights()) weights.push_back(w);
  return {{"dims", s.dims()}, {"weights", weights}};
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

Json blocks_json(const std::vector<Matrix>& blocks) {
  Json out = Json::array();
  for (const auto& b : blocks) out.push_back(to_json(b));
  return out;
}

std::vector<Matrix> blocks_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "\"blocks\" must be an array");
  std::vector<Matrix> out;
  for (const auto& b : j) out.push_back(matrix_from_json(b));
  return out;
}

}  // namespace

Json to_json(const AlgebraElement& a) {
  return {{"shape", to_json(a.shape)}, {"blocks", blocks_json(a.blocks)}};
}

Json to_json(const ModuleVector& x) {
  return {{"shape", to_json(x.shape)}, {"n", x.n}, {"blocks", blocks_json(x.blocks)}};
}

Json to_json(const ModuleOperator& k) {
  const double scale = std::max(1.0, operator_norm(k));
  return {{"shape", to_json(k.shape)},
          {"n", k.n},
          {"hermitian", hermitian_defect(k) <= 1e-10 * scale},
          {"blocks", blocks_json(k.blocks)}};
}

Json to_json(const Diagonalization& d) {
  Json vecs = Json::array(), vals = Json::array();
  for (const auto& x : d.eigenvectors) vecs.push_back(to_json(x));
  for (const auto& l : d.eigenvalues) vals.push_back(to_json(l));
  const auto& first = d.eigenvectors.front();
  return {{"shape", to_json(first.shape)}, {"n", first.n},       {"eigenvectors", vecs},
          {"eigenvalues", vals},           {"margins", d.ordering_margins},
          {"residual", d.residual}};
}

Json to_json(const IterationTrace& t) {
  Json steps = Json::array();
  for (std::size_t s = 0; s < t.steps.size(); ++s) {
    const auto& st = t.steps[s];
    steps.push_back({{"n", s + 1},
                     {"eps", st.eps},
                     {"step_distance", st.step_distance},
                     {"approximation_error", st.approximation_error},
                     {"residual", st.residual}});
  }
  Json limits = Json::array();
  for (const auto& l : t.limits) limits.push_back(to_json(l));
  return {{"steps", steps}, {"limits", limits}, {"final_residual", t.final_residual}};
}

Json to_json(const SelectionReport& r, const OperatorField& f) {
  Json degs = Json::array();
  for (const auto& d : r.degeneracies)
    degs.push_back({{"k1", f.k1(d.point)}, {"k2", f.k2(d.point)}, {"band", d.band}, {"gap", d.gap}});
  return {{"grid_spacing", r.grid_spacing},
          {"lipschitz", r.lipschitz},
          {"modulus", r.modulus},
          {"certificate_bound", r.certificate_bound},
          {"continuity_ok", r.continuity_ok},
          {"weyl_slack", r.weyl_slack},
          {"degeneracies", degs},
          {"spectrum_min", r.spectrum_min},
          {"spectrum_max", r.spectrum_max},
          {"min_max_defect", r.min_max_defect},
          {"symmetry_defect", r.symmetry_defect},
          {"value_count", r.value_count}};
}

Json to_json(const MatchReport& r) {
  Json pairs = Json::array();
  for (const auto& [a, b] : r.pairs) pairs.push_back(Json::array({to_json(a), to_json(b)}));
  return {{"delta", r.delta},
          {"conjugation_defect", r.conjugation_defect},
          {"pair_bounds", r.pair_bounds},
          {"max_pair_bound", r.max_pair_bound},
          {"eigenvector_defect", r.eigenvector_defect},
          {"pairs", pairs},
          {"unitary", to_json(r.unitary)}};
}

AlgebraShape shape_from_json(const Json& j) {
  const auto dims = get<std::vector<int>>(field(j, "dims"), "dims");
  std::vector<double> weights;
  if (j.contains("weights")) weights = get<std::vector<double>>(j.at("weights"), "weights");
  return AlgebraShape(dims, weights);
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw Error(ErrorKind::ParseError, "matrix must be a non-empty array of rows");
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw Error(ErrorKind::ParseError, "ragged matrix row " + std::to_string(r));
    for (Index c = 0; c < cols; ++c) {
      const Json& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = get<double>(e, "entry");
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = Complex(get<double>(e[0], "entry"), get<double>(e[1], "entry"));
      } else {
        throw Error(ErrorKind::ParseError, "complex entry must be [re, im]");
      }
    }
  }
  return m;
}

AlgebraElement element_from_json(const Json& j) {
  return AlgebraElement(shape_from_json(field(j, "shape")), blocks_from_json(field(j, "blocks")));
}

ModuleVector vector_from_json(const Json& j) {
  return ModuleVector(shape_from_json(field(j, "shape")), get<int>(field(j, "n"), "n"),
                      blocks_from_json(field(j, "blocks")));
}

ModuleOperator operator_from_json(const Json& j) {
  ModuleOperator k(shape_from_json(field(j, "shape")), get<int>(field(j, "n"), "n"),
                   blocks_from_json(field(j, "blocks")));
  if (j.contains("hermitian") && get<bool>(j.at("hermitian"), "hermitian")) {
    const double scale = std::max(1.0, operator_norm(k));
    if (hermitian_defect(k) > 1e-10 * scale)
      throw Error(ErrorKind::NotHermitian, "operator flagged hermitian is not Hermitian");
  }
  return k;
}

Diagonalization diagonalization_from_json(const Json& j) {
  Diagonalization d;
  for (const auto& x : field(j, "eigenvectors")) d.eigenvectors.push_back(vector_from_json(x));
  for (const auto& l : field(j, "eigenvalues")) d.eigenvalues.push_back(element_from_json(l));
  d.ordering_margins = get<std::vector<std::vector<double>>>(field(j, "margins"), "margins");
  d.residual = get<double>(field(j, "residual"), "residual");
  return d;
}

std::string scale_csv(const SpectralScale& scale) {
  std::string out = "alpha,epsilon\n";
  double prev = 0.0;
  for (std::size_t i = 0; i < scale.atoms().size(); ++i) {
    const double c = scale.cumulative(i);
    if (c - prev > 1e-12) {
      const double mid = 0.5 * (prev + c);
      out += format_double(mid) + ',' + format_double(scale.evaluate(mid)) + '\n';
      out += format_double(c) + ',' + format_double(scale.evaluate(c)) + '\n';
    }
    prev = c;
  }
  return out;
}

std::string bands_csv(const OperatorField& f, const BandSystem& bands) {
  std::string out = "k1,k2,band_index,value\n";
  for (std::size_t pt = 0; pt < f.point_count(); ++pt) {
    const std::string prefix = format_double(f.k1(pt)) + ',' + format_double(f.k2(pt)) + ',';
    for (int b = 0; b < bands.q; ++b)
      out += prefix + std::to_string(b) + ',' + format_double(bands.value(pt, b)) + '\n';
  }
  return out;
}

std::string butterfly_csv(const std::vector<ButterflyRow>& rows) {
  std::string out = "p,q,value\n";
  for (const auto& r : rows)
    out += std::to_string(r.p) + ',' + std::to_string(r.q) + ',' + format_double(r.value) + '\n';
  return out;
}

}  // namespace modspec
