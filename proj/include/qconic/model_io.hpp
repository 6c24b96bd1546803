// Copyright 2026 The qconic Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Model serialization.
//
// JSON dump (see docs in README): top-level keys `variables`, `objective`,
// `linear_eqs`, `linear_ineqs`, `soc_primary`, `soc_secondary`, `metadata`.
// An affine expression is {"constant": c, "terms": [[id, coef], ...]} with
// terms sorted by id. Infinite bounds are written as null. Doubles use the
// shortest representation that parses back to the same bits.
//
// CBF export: Conic Benchmark Format version 3, primary-form cones only.

#ifndef QCONIC_MODEL_IO_HPP_
#define QCONIC_MODEL_IO_HPP_

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include "qconic/error.hpp"
#include "qconic/model.hpp"

namespace qconic {

namespace detail {

using json = nlohmann::json;

inline json bound_to_json(double b) {
  if (std::isinf(b)) return nullptr;
  return b;
}

inline double bound_from_json(const json& j, double inf) {
  return j.is_null() ? inf : j.get<double>();
}

inline json expr_to_json(const LinExpr& e) {
  json terms = json::array();
  for (const auto& [v, c] : e.terms()) terms.push_back(json::array({v.value, c}));
  return json{{"constant", e.constant()}, {"terms", std::move(terms)}};
}

inline LinExpr expr_from_json(const json& j) {
  LinExpr e(j.at("constant").get<double>());
  for (const json& t : j.at("terms")) {
    e.add(VarId{t.at(0).get<int>()}, t.at(1).get<double>());
  }
  return e;
}

inline json exprs_to_json(const std::vector<LinExpr>& es) {
  json a = json::array();
  for (const auto& e : es) a.push_back(expr_to_json(e));
  return a;
}

inline std::vector<LinExpr> exprs_from_json(const json& j) {
  std::vector<LinExpr> out;
  for (const json& e : j) out.push_back(expr_from_json(e));
  return out;
}

}  // namespace detail

inline nlohmann::json model_to_json(const ConicModel& m) {
  using detail::json;
  json vars = json::array();
  for (const Variable& v : m.variables) {
    vars.push_back({{"id", v.id.value},
                    {"name", v.name},
                    {"kind", v.kind == VarKind::Binary ? "binary" : "continuous"},
                    {"lower", detail::bound_to_json(v.lower)},
                    {"upper", detail::bound_to_json(v.upper)}});
  }
  json prim = json::array();
  for (const SocPrimary& c : m.soc_primary) {
    prim.push_back({{"norm_rows", detail::exprs_to_json(c.norm_rows)},
                    {"rhs", detail::expr_to_json(c.rhs)}});
  }
  json sec = json::array();
  for (const SocSecondary& c : m.soc_secondary) {
    sec.push_back({{"form", c.form == SecondaryForm::FormI ? "I" : "II"},
                   {"quad_rows", detail::exprs_to_json(c.quad_rows)},
                   {"y", detail::expr_to_json(c.y)},
                   {"z", c.z ? detail::expr_to_json(*c.z) : json(nullptr)}});
  }
  json meta = json::object();
  for (const auto& [k, v] : m.metadata) meta[k] = v;
  return json{{"variables", std::move(vars)},
              {"objective", detail::expr_to_json(m.objective)},
              {"linear_eqs", detail::exprs_to_json(m.linear_eqs)},
              {"linear_ineqs", detail::exprs_to_json(m.linear_ineqs)},
              {"soc_primary", std::move(prim)},
              {"soc_secondary", std::move(sec)},
              {"metadata", std::move(meta)}};
}

inline ConicModel model_from_json(const nlohmann::json& j) {
  ConicModel m;
  try {
    for (const auto& v : j.at("variables")) {
      const std::string kind = v.at("kind").get<std::string>();
      if (kind != "binary" && kind != "continuous") {
        throw InvalidArgument("unknown variable kind '" + kind + "'");
      }
      Variable var{VarId{v.at("id").get<int>()}, v.at("name").get<std::string>(),
                   kind == "binary" ? VarKind::Binary : VarKind::Continuous,
                   detail::bound_from_json(v.at("lower"), -kInfinity),
                   detail::bound_from_json(v.at("upper"), kInfinity)};
      m.variables.push_back(std::move(var));
    }
    m.objective = detail::expr_from_json(j.at("objective"));
    m.linear_eqs = detail::exprs_from_json(j.at("linear_eqs"));
    m.linear_ineqs = detail::exprs_from_json(j.at("linear_ineqs"));
    for (const auto& c : j.at("soc_primary")) {
      m.soc_primary.push_back({detail::exprs_from_json(c.at("norm_rows")),
                               detail::expr_from_json(c.at("rhs"))});
    }
    for (const auto& c : j.at("soc_secondary")) {
      SocSecondary s;
      const std::string form = c.at("form").get<std::string>();
      if (form != "I" && form != "II") {
        throw InvalidArgument("unknown secondary form '" + form + "'");
      }
      s.form = form == "I" ? SecondaryForm::FormI : SecondaryForm::FormII;
      s.quad_rows = detail::exprs_from_json(c.at("quad_rows"));
      s.y = detail::expr_from_json(c.at("y"));
      if (!c.at("z").is_null()) s.z = detail::expr_from_json(c.at("z"));
      m.soc_secondary.push_back(std::move(s));
    }
    for (const auto& [k, v] : j.at("metadata").items()) {
      m.metadata[k] = v.get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed model JSON: ") + e.what());
  }
  return m;
}

inline std::string dump_model(const ConicModel& m) {
  return model_to_json(m).dump(1) + "\n";
}

inline ConicModel parse_model(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed model JSON: ") + e.what());
  }
  return model_from_json(j);
}

namespace detail {

inline std::string cbf_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct CbfRow {
  std::vector<std::pair<int, double>> coefs;
  double constant = 0.0;
};

inline CbfRow cbf_row(const LinExpr& e, double scale = 1.0) {
  CbfRow r;
  for (const auto& [v, c] : e.terms()) r.coefs.emplace_back(v.value, scale * c);
  r.constant = scale * e.constant();
  return r;
}

}  // namespace detail

// Writes `m` in CBF layout: every constraint is A x + b in K. Linear
// equalities map to L=, inequalities (expr <= 0) to L-, finite variable
// bounds to L+ / L- rows, and each primary cone to a Q block whose first
// entry is the right-hand side.
inline void write_cbf(const ConicModel& m, std::ostream& out) {
  using detail::CbfRow;
  struct Block {
    std::string domain;
    std::vector<CbfRow> rows;
  };
  std::vector<Block> blocks;
  auto push_linear = [&blocks](const std::string& dom, CbfRow row) {
    if (blocks.empty() || blocks.back().domain != dom) {
      blocks.push_back({dom, {}});
    }
    blocks.back().rows.push_back(std::move(row));
  };
  for (const auto& e : m.linear_eqs) push_linear("L=", detail::cbf_row(e));
  for (const auto& e : m.linear_ineqs) push_linear("L-", detail::cbf_row(e));
  for (const Variable& v : m.variables) {
    if (std::isfinite(v.lower)) {
      push_linear("L+", {{{v.id.value, 1.0}}, -v.lower});
    }
    if (std::isfinite(v.upper)) {
      push_linear("L-", {{{v.id.value, 1.0}}, -v.upper});
    }
  }
  for (const SocPrimary& c : m.soc_primary) {
    Block b{"Q", {}};
    b.rows.push_back(detail::cbf_row(c.rhs));
    for (const auto& r : c.norm_rows) b.rows.push_back(detail::cbf_row(r));
    blocks.push_back(std::move(b));
  }

  int ints = 0;
  for (const Variable& v : m.variables) ints += v.kind == VarKind::Binary;
  std::size_t total_rows = 0;
  std::size_t annz = 0;
  std::size_t bnz = 0;
  for (const auto& b : blocks) {
    total_rows += b.rows.size();
    for (const auto& r : b.rows) {
      annz += r.coefs.size();
      bnz += r.constant != 0.0;
    }
  }

  out << "# qconic conic export\n";
  out << "VER\n3\n\n";
  out << "OBJSENSE\nMIN\n\n";
  out << "VAR\n" << m.variables.size() << " 1\nF " << m.variables.size()
      << "\n\n";
  if (ints > 0) {
    out << "INT\n" << ints << "\n";
    for (const Variable& v : m.variables) {
      if (v.kind == VarKind::Binary) out << v.id.value << "\n";
    }
    out << "\n";
  }
  out << "CON\n" << total_rows << " " << blocks.size() << "\n";
  for (const auto& b : blocks) out << b.domain << " " << b.rows.size() << "\n";
  out << "\n";
  if (!m.objective.terms().empty()) {
    out << "OBJACOORD\n" << m.objective.terms().size() << "\n";
    for (const auto& [v, c] : m.objective.terms()) {
      out << v.value << " " << detail::cbf_num(c) << "\n";
    }
    out << "\n";
  }
  if (m.objective.constant() != 0.0) {
    out << "OBJBCOORD\n" << detail::cbf_num(m.objective.constant()) << "\n\n";
  }
  if (annz > 0) {
    out << "ACOORD\n" << annz << "\n";
    std::size_t row = 0;
    for (const auto& b : blocks) {
      for (const auto& r : b.rows) {
        for (const auto& [j, a] : r.coefs) {
          out << row << " " << j << " " << detail::cbf_num(a) << "\n";
        }
        ++row;
      }
    }
    out << "\n";
  }
  if (bnz > 0) {
    out << "BCOORD\n" << bnz << "\n";
    std::size_t row = 0;
    for (const auto& b : blocks) {
      for (const auto& r : b.rows) {
        if (r.constant != 0.0) {
          out << row << " " << detail::cbf_num(r.constant) << "\n";
        }
        ++row;
      }
    }
    out << "\n";
  }
}

inline std::string export_cbf(const ConicModel& m) {
  std::ostringstream os;
  write_cbf(m, os);
  return os.str();
}

}  // namespace qconic

#endif  // QCONIC_MODEL_IO_HPP_
