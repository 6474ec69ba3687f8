#pragma once

#include <json.hpp>

#include "ncfm/function_ops.hpp"
#include "ncfm/hermitian.hpp"
#include "ncfm/taylor.hpp"

namespace ncfm {

using json = nlohmann::ordered_json;

// Matrix text format: {"rows":n,"cols":m,"data":[[entry,...],...]} with
// exact rationals as "p/q" or integer strings and floats as JSON numbers.

inline json scalar_to_json(const Rational& q) { return json(to_string(q)); }
inline json scalar_to_json(double x) { return json(x); }

template <typename K>
K scalar_from_json(const json& j);

template <>
inline Rational scalar_from_json<Rational>(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw std::invalid_argument("expected an exact rational (string or integer), got: " + j.dump());
}

template <>
inline double scalar_from_json<double>(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_rational(j.get<std::string>()).get_d();
  throw std::invalid_argument("expected a number, got: " + j.dump());
}

template <typename K>
json to_json(const Matrix<K>& m) {
  json data = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    data.push_back(row);
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

template <typename K>
Matrix<K> matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw std::invalid_argument("matrix object must have rows/cols/data");
  int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
  Matrix<K> m(rows, cols);
  const json& data = j.at("data");
  if (static_cast<int>(data.size()) != rows) throw std::invalid_argument("matrix data: row count mismatch");
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(data[i].size()) != cols)
      throw std::invalid_argument("matrix data: column count mismatch");
    for (int jj = 0; jj < cols; ++jj) m(i, jj) = scalar_from_json<K>(data[i][jj]);
  }
  return m;
}

template <typename K>
json to_json(const std::vector<Matrix<K>>& tuple) {
  json arr = json::array();
  for (const auto& m : tuple) arr.push_back(to_json(m));
  return arr;
}

template <typename K>
std::vector<Matrix<K>> matrix_tuple_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a nonempty array of matrices");
  std::vector<Matrix<K>> out;
  for (const auto& item : j) out.push_back(matrix_from_json<K>(item));
  return out;
}

// BlockLinearMap: {"s":s,"p":p,"q":q,"images":[[matrix,...],...]} row-major
// over the basis index (i,j).
template <typename K>
json to_json(const BlockLinearMap<K>& t) {
  json images = json::array();
  for (int i = 0; i < t.input_size(); ++i) {
    json row = json::array();
    for (int j = 0; j < t.input_size(); ++j) row.push_back(to_json(t.image(i, j)));
    images.push_back(row);
  }
  return json{{"s", t.input_size()}, {"p", t.out_rows()}, {"q", t.out_cols()}, {"images", images}};
}

template <typename K>
BlockLinearMap<K> linmap_from_json(const json& j) {
  int s = j.at("s").get<int>(), p = j.at("p").get<int>(), q = j.at("q").get<int>();
  BlockLinearMap<K> t(s, p, q);
  const json& images = j.at("images");
  for (int i = 0; i < s; ++i)
    for (int jj = 0; jj < s; ++jj) t.image(i, jj) = matrix_from_json<K>(images.at(i).at(jj));
  return t;
}

template <typename K>
json to_json(const FMRealization<K>& r) {
  json a = json::array(), b = json::array();
  for (const auto& ak : r.A) a.push_back(to_json(ak));
  for (const auto& bk : r.B) b.push_back(to_json(bk));
  return json{{"d", r.d},         {"s", r.s},         {"centre", to_json(r.centre)},
              {"L", r.L},         {"D", to_json(r.D)}, {"C", to_json(r.C)},
              {"A", a},           {"B", b}};
}

template <typename K>
FMRealization<K> realization_from_json(const json& j) {
  FMRealization<K> r;
  r.d = j.at("d").get<int>();
  r.s = j.at("s").get<int>();
  r.centre = matrix_tuple_from_json<K>(j.at("centre"));
  r.L = j.at("L").get<int>();
  r.D = matrix_from_json<K>(j.at("D"));
  r.C = matrix_from_json<K>(j.at("C"));
  for (const auto& a : j.at("A")) r.A.push_back(linmap_from_json<K>(a));
  for (const auto& b : j.at("B")) r.B.push_back(linmap_from_json<K>(b));
  r.check_consistent();
  return r;
}

template <typename K>
json to_json(const KalmanReport<K>& rep) {
  return json{{"original_L", rep.original_L},
              {"dim_controllable", rep.dim_controllable},
              {"dim_unobservable", rep.dim_unobservable},
              {"dim_intersection", rep.dim_intersection},
              {"reduced_L", rep.reduced_L},
              {"basis_change", to_json(rep.basis_change)}};
}

// TaylorTable: words as 1-based letter arrays in canonical order; values in
// canonical basis-tuple order.
template <typename K>
json to_json(const TaylorTable<K>& t) {
  json coeffs = json::array();
  for (const Word& w : words_up_to(t.d, t.order)) {
    json word = json::array();
    for (int letter : w) word.push_back(letter + 1);
    json values = json::array();
    for (const auto& v : t.coeff.at(w)) values.push_back(to_json(v));
    coeffs.push_back(json{{"word", word}, {"values", values}});
  }
  return json{{"d", t.d},
              {"s", t.s},
              {"order", t.order},
              {"centre", to_json(t.centre)},
              {"coefficients", coeffs}};
}

// Descriptor JSON mirrors the FM schema, with the diagonal "J" replacing the
// implicit identity metric and "B"/"D" optional by variant.
template <typename K>
json to_json(const DescriptorRealization<K>& r) {
  json out{{"d", r.d}, {"s", r.s}, {"centre", to_json(r.centre)}, {"L", r.L}};
  if (r.D) out["D"] = to_json(*r.D);
  out["C"] = to_json(r.C);
  if (r.metric) {
    json diag = json::array();
    for (const K& x : *r.metric) diag.push_back(scalar_to_json(x));
    out["J"] = diag;
  }
  if (r.B) out["B"] = to_json(*r.B);
  json a = json::array();
  for (const auto& ak : r.A) a.push_back(to_json(ak));
  out["A"] = a;
  return out;
}

template <typename K>
DescriptorRealization<K> descriptor_from_json(const json& j) {
  DescriptorRealization<K> r;
  r.d = j.at("d").get<int>();
  r.s = j.at("s").get<int>();
  r.centre = matrix_tuple_from_json<K>(j.at("centre"));
  r.L = j.at("L").get<int>();
  if (j.contains("D")) r.D = matrix_from_json<K>(j.at("D"));
  r.C = matrix_from_json<K>(j.at("C"));
  if (j.contains("J")) {
    std::vector<K> diag;
    for (const auto& x : j.at("J")) diag.push_back(scalar_from_json<K>(x));
    r.metric = diag;
  }
  if (j.contains("B")) r.B = matrix_from_json<K>(j.at("B"));
  for (const auto& a : j.at("A")) r.A.push_back(linmap_from_json<K>(a));
  return r;
}

template <typename K>
json to_json(const HermitianStructure<K>& h) {
  json delta = json::array(), sig = json::array();
  for (const K& x : h.delta) delta.push_back(scalar_to_json(x));
  for (int x : h.J) sig.push_back(x);
  json a = json::array();
  for (const auto& ak : h.A_check) a.push_back(to_json(ak));
  return json{{"S", to_json(h.S)},       {"T", to_json(h.T)}, {"delta", delta},
              {"J", sig},                {"C_check", to_json(h.C_check)},
              {"A_check", a}};
}

template <typename K>
json to_json(const EquivalenceVerdict<K>& v) {
  json out;
  switch (v.status) {
    case Equivalence::Equivalent: out["equivalent"] = true; break;
    case Equivalence::NotEquivalent: out["equivalent"] = false; break;
    case Equivalence::Inconclusive: out["equivalent"] = "inconclusive"; break;
  }
  if (v.status != Equivalence::Inconclusive) {
    out["centre_size"] = v.centre_size;
    out["centre"] = to_json(v.centre);
  }
  if (v.status == Equivalence::Equivalent) out["similarity"] = to_json(v.similarity);
  if (v.mismatch) out["mismatch"] = json{{"what", v.mismatch->what}, {"L1", v.mismatch->L1}, {"L2", v.mismatch->L2}};
  if (v.separating_point) out["separating_point"] = to_json(*v.separating_point);
  if (!v.detail.empty()) out["detail"] = v.detail;
  return out;
}

}  // namespace ncfm
