#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <span>
#include <string>
#include <vector>

namespace pmp::nlp {

// Sparse multivariate polynomial over the decision vector. Every constraint and
// objective of the planning problems is a low-degree polynomial, so first and
// second derivatives are computed exactly from the monomials.
class Poly {
 public:
  struct Term {
    double coef = 0.0;
    std::vector<int> vars;  // sorted; repeated indices encode powers
  };

  Poly() = default;
  Poly(double c) {  // NOLINT: implicit constants keep expressions readable
    if (c != 0.0) terms_.push_back({c, {}});
  }

  static Poly var(int index) {
    Poly p;
    p.terms_.push_back({1.0, {index}});
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    size_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.vars.size());
    return static_cast<int>(d);
  }

  // Distinct variables the polynomial depends on, sorted.
  std::vector<int> support() const {
    std::vector<int> out;
    for (const auto& t : terms_) out.insert(out.end(), t.vars.begin(), t.vars.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  double operator()(std::span<const double> x) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
      double prod = t.coef;
      for (int v : t.vars) prod *= x[v];
      sum += prod;
    }
    return sum;
  }

  // Calls emit(index, d/dx_index) once per variable occurrence; callers
  // accumulate.
  template <typename Emit>
  void gradient(std::span<const double> x, double scale, Emit&& emit) const {
    for (const auto& t : terms_) {
      const size_t k = t.vars.size();
      // Repeated variables emit once per occurrence, which sums to m x^(m-1).
      for (size_t a = 0; a < k; ++a) {
        double prod = scale * t.coef;
        for (size_t b = 0; b < k; ++b) {
          if (b != a) prod *= x[t.vars[b]];
        }
        emit(t.vars[a], prod);
      }
    }
  }

  // Calls emit(i, j, value) with i >= j for the lower triangle of the Hessian.
  template <typename Emit>
  void hessian(std::span<const double> x, double scale, Emit&& emit) const {
    for (const auto& t : terms_) {
      const size_t k = t.vars.size();
      for (size_t a = 0; a < k; ++a) {
        for (size_t b = a + 1; b < k; ++b) {
          double prod = scale * t.coef;
          for (size_t c = 0; c < k; ++c) {
            if (c != a && c != b) prod *= x[t.vars[c]];
          }
          const int i = t.vars[a];
          const int j = t.vars[b];
          if (i == j) {
            emit(i, i, 2.0 * prod);
          } else {
            emit(std::max(i, j), std::min(i, j), prod);
          }
        }
      }
    }
  }

  // Lower-triangle Hessian sparsity, with repeats.
  template <typename Emit>
  void hessian_structure(Emit&& emit) const {
    for (const auto& t : terms_) {
      const size_t k = t.vars.size();
      for (size_t a = 0; a < k; ++a) {
        for (size_t b = a + 1; b < k; ++b) {
          emit(std::max(t.vars[a], t.vars[b]), std::min(t.vars[a], t.vars[b]));
        }
      }
    }
  }

  Poly& operator+=(const Poly& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    normalize();
    return *this;
  }
  Poly& operator-=(const Poly& o) { return *this += -o; }
  Poly& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& t : terms_) t.coef *= s;
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) { return a *= -1.0; }
  friend Poly operator*(Poly a, double s) { return a *= s; }
  friend Poly operator*(double s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    out.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        Term t;
        t.coef = ta.coef * tb.coef;
        t.vars.reserve(ta.vars.size() + tb.vars.size());
        std::merge(ta.vars.begin(), ta.vars.end(), tb.vars.begin(),
                   tb.vars.end(), std::back_inserter(t.vars));
        out.terms_.push_back(std::move(t));
      }
    }
    out.normalize();
    return out;
  }

  std::string to_string(const std::vector<std::string>& names = {}) const {
    if (terms_.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < terms_.size(); ++i) {
      const auto& t = terms_[i];
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%s%.6g", i == 0 ? "" : " + ", t.coef);
      out += buf;
      for (int v : t.vars) {
        out += "*";
        out += v < static_cast<int>(names.size()) ? names[v]
                                                   : "x" + std::to_string(v);
      }
    }
    return out;
  }

 private:
  void normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.vars < b.vars; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().vars == t.vars) {
        merged.back().coef += t.coef;
      } else {
        merged.push_back(std::move(t));
      }
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
    terms_ = std::move(merged);
  }

  std::vector<Term> terms_;
};

}  // namespace pmp::nlp
