#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grusslab/linalg.hpp"
#include "grusslab/types.hpp"

namespace grusslab {

// ---------------------------------------------------------------------------
// Symmetric gauges and the unitarily invariant norms they induce.
//
// A gauge acts on the singular-value vector. Norms of matrices of different
// sizes are tied together by zero-padding, so every gauge here must satisfy
// g(s) = g(s, 0) exactly; for user-registered gauges this is enforced by
// canonicalizing the argument (sorted descending, trailing zeros stripped)
// before evaluation.
// ---------------------------------------------------------------------------

struct GaugeSpec {
  enum class Kind { Operator, KyFan, Schatten, Custom };

  Kind kind = Kind::Operator;
  int k = 1;         // Ky Fan order
  double p = 2.0;    // Schatten exponent
  std::string name;  // custom gauge lookup key

  static GaugeSpec operator_norm() { return {Kind::Operator, 1, 2.0, {}}; }
  static GaugeSpec ky_fan(int k) {
    if (k < 1) throw ConfigError("ky_fan gauge: k must be >= 1, got " + std::to_string(k));
    return {Kind::KyFan, k, 2.0, {}};
  }
  static GaugeSpec schatten(double p) {
    if (!(p >= 1.0)) throw ConfigError("schatten gauge: p must be >= 1, got " + std::to_string(p));
    return {Kind::Schatten, 1, p, {}};
  }
  static GaugeSpec custom(std::string name) { return {Kind::Custom, 1, 2.0, std::move(name)}; }
};

/// A user gauge sees the canonical vector: nonnegative, sorted descending,
/// trailing zeros stripped. It must be a norm, invariant under permutations
/// and absolute values; padding invariance then comes for free.
using GaugeFn = std::function<double(const std::vector<double>&)>;

namespace detail {

inline std::map<std::string, GaugeFn>& gauge_registry() {
  static std::map<std::string, GaugeFn> registry;
  return registry;
}

inline std::vector<double> canonical_values(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<double>());
  while (!v.empty() && v.back() == 0.0) v.pop_back();
  return v;
}

}  // namespace detail

/// Register a custom symmetric gauge. Intended for startup only; the
/// registry is treated as immutable once evaluation begins.
inline void register_gauge(const std::string& name, GaugeFn fn) {
  detail::gauge_registry()[name] = std::move(fn);
}

/// Evaluate a gauge on a finite value vector (any order, zeros allowed).
inline double evaluate_gauge(const GaugeSpec& g, std::vector<double> values) {
  const std::vector<double> s = detail::canonical_values(std::move(values));
  switch (g.kind) {
    case GaugeSpec::Kind::Operator:
      return s.empty() ? 0.0 : s.front();
    case GaugeSpec::Kind::KyFan: {
      if (g.k < 1) throw ConfigError("ky_fan gauge: k must be >= 1");
      double sum = 0.0;
      const std::size_t top = std::min<std::size_t>(s.size(), static_cast<std::size_t>(g.k));
      for (std::size_t j = 0; j < top; ++j) sum += s[j];
      return sum;
    }
    case GaugeSpec::Kind::Schatten: {
      if (!(g.p >= 1.0)) throw ConfigError("schatten gauge: p must be >= 1");
      double sum = 0.0;
      for (double v : s) sum += std::pow(v, g.p);
      return std::pow(sum, 1.0 / g.p);
    }
    case GaugeSpec::Kind::Custom: {
      auto it = detail::gauge_registry().find(g.name);
      if (it == detail::gauge_registry().end())
        throw ConfigError("unknown custom gauge '" + g.name + "'");
      return it->second(s);
    }
  }
  throw ConfigError("invalid gauge kind");
}

namespace detail {

// Structurally removing all-zero rows/columns leaves the nonzero singular
// values untouched and makes |||A||| = |||A (+) 0||| hold exactly, not just
// to roundoff, because both sides reduce to the same trimmed matrix.
inline ComplexMatrix trim_zero_rows_cols(const ComplexMatrix& a) {
  std::vector<Index> rows, cols;
  for (Index i = 0; i < a.rows(); ++i)
    if (!a.row(i).isZero(0.0)) rows.push_back(i);
  for (Index j = 0; j < a.cols(); ++j)
    if (!a.col(j).isZero(0.0)) cols.push_back(j);
  ComplexMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
  return out;
}

}  // namespace detail

/// |||A||| = g(s(A)) with the zero-padding convention.
inline double gauge_norm(const GaugeSpec& g, const ComplexMatrix& a) {
  require_finite(a, "gauge_norm");
  const ComplexMatrix trimmed = detail::trim_zero_rows_cols(a);
  if (trimmed.size() == 0) return 0.0;
  const RealVector s = singular_values(trimmed).values;
  return evaluate_gauge(g, std::vector<double>(s.data(), s.data() + s.size()));
}

/// |||I_k|||, computed by evaluating the gauge on the k-dimensional all-ones
/// vector rather than from closed forms, so custom gauges stay correct.
inline double gauge_identity_value(const GaugeSpec& g, Index k) {
  if (k < 0) throw ConfigError("gauge_identity_value: negative dimension");
  return evaluate_gauge(g, std::vector<double>(static_cast<std::size_t>(k), 1.0));
}

// --- gauge string syntax: "op" | "kyfan:K" | "schatten:P" | custom name ----

inline std::string to_string(const GaugeSpec& g) {
  switch (g.kind) {
    case GaugeSpec::Kind::Operator: return "op";
    case GaugeSpec::Kind::KyFan: return "kyfan:" + std::to_string(g.k);
    case GaugeSpec::Kind::Schatten: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "schatten:%.12g", g.p);
      return buf;
    }
    case GaugeSpec::Kind::Custom: return g.name;
  }
  return "?";
}

inline GaugeSpec parse_gauge(const std::string& token) {
  if (token == "op") return GaugeSpec::operator_norm();
  if (token.rfind("kyfan:", 0) == 0) {
    const std::string arg = token.substr(6);
    try {
      std::size_t pos = 0;
      const int k = std::stoi(arg, &pos);
      if (pos != arg.size()) throw std::invalid_argument(arg);
      return GaugeSpec::ky_fan(k);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("gauge '" + token + "': bad Ky Fan order '" + arg + "'");
    }
  }
  if (token.rfind("schatten:", 0) == 0) {
    const std::string arg = token.substr(9);
    try {
      std::size_t pos = 0;
      const double p = std::stod(arg, &pos);
      if (pos != arg.size()) throw std::invalid_argument(arg);
      return GaugeSpec::schatten(p);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("gauge '" + token + "': bad Schatten exponent '" + arg + "'");
    }
  }
  if (detail::gauge_registry().count(token)) return GaugeSpec::custom(token);
  throw ConfigError("unrecognized gauge token '" + token + "'");
}

// ---------------------------------------------------------------------------
// Majorization utilities
// ---------------------------------------------------------------------------

struct MajorizationVerdict {
  bool holds = false;
  std::optional<int> first_violation_index;  // 1-based partial-sum index
  std::vector<double> margins;               // dominating side minus dominated
};

/// Ky Fan dominance: partial sums of s(A) vs s(B) for every order k.
/// Dominance for all k orders A below B in every unitarily invariant norm.
inline MajorizationVerdict ky_fan_dominates(const ComplexMatrix& a, const ComplexMatrix& b,
                                            double tol = 1e-8) {
  const RealVector sa = singular_values(a).values;
  const RealVector sb = singular_values(b).values;
  const Index len = std::max(sa.size(), sb.size());
  MajorizationVerdict verdict;
  verdict.holds = true;
  double suma = 0.0, sumb = 0.0;
  for (Index k = 0; k < len; ++k) {
    suma += k < sa.size() ? sa(k) : 0.0;
    sumb += k < sb.size() ? sb(k) : 0.0;
    verdict.margins.push_back(sumb - suma);
    if (verdict.holds && suma > sumb + tol * (1.0 + sumb)) {
      verdict.holds = false;
      verdict.first_violation_index = static_cast<int>(k) + 1;
    }
  }
  return verdict;
}

/// Weak majorization of descending nonnegative sequences: partial sums, or
/// partial products when `logarithmic` is set.
inline MajorizationVerdict weak_majorization(std::vector<double> x, std::vector<double> y,
                                             bool logarithmic, double tol = 1e-8) {
  if (logarithmic) {
    for (double v : x)
      if (v < 0.0) throw DomainError("weak_majorization: negative entry in log mode");
    for (double v : y)
      if (v < 0.0) throw DomainError("weak_majorization: negative entry in log mode");
  }
  x = detail::canonical_values(std::move(x));
  y = detail::canonical_values(std::move(y));
  const std::size_t len = std::max(x.size(), y.size());
  x.resize(len, 0.0);
  y.resize(len, 0.0);

  MajorizationVerdict verdict;
  verdict.holds = true;
  double accx = logarithmic ? 1.0 : 0.0;
  double accy = logarithmic ? 1.0 : 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    bool ok;
    if (logarithmic) {
      accx *= x[k];
      accy *= y[k];
      ok = accx <= accy * (1.0 + tol);
    } else {
      accx += x[k];
      accy += y[k];
      ok = accx <= accy + tol * (1.0 + std::abs(accy));
    }
    verdict.margins.push_back(accy - accx);
    if (verdict.holds && !ok) {
      verdict.holds = false;
      verdict.first_violation_index = static_cast<int>(k) + 1;
    }
  }
  return verdict;
}

}  // namespace grusslab
