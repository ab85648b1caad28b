#include "compiled.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace distdeg::detail {

CompiledSystem::CompiledSystem(std::span<const Polynomial> equations) {
  num_vars_ = equations.empty() ? 0 : static_cast<Eigen::Index>(equations.front().num_vars());
  max_exp_.assign(static_cast<std::size_t>(num_vars_), 0);
  for (const auto& p : equations) {
    if (static_cast<Eigen::Index>(p.num_vars()) != num_vars_) {
      throw std::invalid_argument("compiled system equations must share a variable context");
    }
    for (const auto& [e, c] : p.terms()) {
      Term t{c, static_cast<std::uint32_t>(factors_.size()), 0};
      for (std::size_t j = 0; j < e.size(); ++j) {
        if (e[j] == 0) continue;
        factors_.push_back({static_cast<std::uint32_t>(j), e[j]});
        max_exp_[j] = std::max(max_exp_[j], e[j]);
      }
      t.factor_end = static_cast<std::uint32_t>(factors_.size());
      terms_.push_back(t);
    }
    eq_begin_.push_back(static_cast<std::uint32_t>(terms_.size()));
  }
  pow_offset_.resize(max_exp_.size());
  std::uint32_t off = 0;
  for (std::size_t j = 0; j < max_exp_.size(); ++j) {
    pow_offset_[j] = off;
    off += max_exp_[j] + 1;
  }
  powers_.resize(off);
}

void CompiledSystem::fill_powers(const Eigen::VectorXcd& z) const {
  if (z.size() != num_vars_) throw std::invalid_argument("evaluation point has wrong dimension");
  for (std::size_t j = 0; j < max_exp_.size(); ++j) {
    Complex* p = powers_.data() + pow_offset_[j];
    p[0] = 1.0;
    for (std::uint32_t k = 1; k <= max_exp_[j]; ++k) p[k] = p[k - 1] * z[static_cast<Eigen::Index>(j)];
  }
}

void CompiledSystem::evaluate(const Eigen::VectorXcd& z, Eigen::VectorXcd& f) const {
  fill_powers(z);
  f.resize(num_equations());
  for (Eigen::Index i = 0; i < num_equations(); ++i) {
    Complex acc{};
    for (auto t = eq_begin_[static_cast<std::size_t>(i)]; t < eq_begin_[static_cast<std::size_t>(i) + 1]; ++t) {
      const Term& term = terms_[t];
      Complex m = term.coef;
      for (auto k = term.factor_begin; k < term.factor_end; ++k) {
        m *= powers_[pow_offset_[factors_[k].var] + factors_[k].exp];
      }
      acc += m;
    }
    f[i] = acc;
  }
}

void CompiledSystem::evaluate(const Eigen::VectorXcd& z, Eigen::VectorXcd& f,
                              Eigen::MatrixXcd& jac) const {
  fill_powers(z);
  f.resize(num_equations());
  jac.setZero(num_equations(), num_vars_);
  for (Eigen::Index i = 0; i < num_equations(); ++i) {
    Complex acc{};
    for (auto t = eq_begin_[static_cast<std::size_t>(i)]; t < eq_begin_[static_cast<std::size_t>(i) + 1]; ++t) {
      const Term& term = terms_[t];
      Complex m = term.coef;
      for (auto k = term.factor_begin; k < term.factor_end; ++k) {
        m *= powers_[pow_offset_[factors_[k].var] + factors_[k].exp];
      }
      acc += m;
      for (auto k = term.factor_begin; k < term.factor_end; ++k) {
        const auto var = factors_[k].var;
        const auto exp = factors_[k].exp;
        Complex d = term.coef * static_cast<double>(exp);
        d *= powers_[pow_offset_[var] + exp - 1];
        for (auto q = term.factor_begin; q < term.factor_end; ++q) {
          if (q != k) d *= powers_[pow_offset_[factors_[q].var] + factors_[q].exp];
        }
        jac(i, static_cast<Eigen::Index>(var)) += d;
      }
    }
    f[i] = acc;
  }
}

Polynomial specialize_trailing(const Polynomial& p, std::size_t keep,
                               std::span<const Complex> values) {
  if (keep + values.size() != p.num_vars()) {
    throw std::invalid_argument("specialization does not cover the trailing variables");
  }
  Polynomial r(keep);
  for (const auto& [e, c] : p.terms()) {
    Complex coef = c;
    for (std::size_t j = 0; j < values.size(); ++j) {
      for (std::uint32_t k = 0; k < e[keep + j]; ++k) coef *= values[j];
    }
    r.add_term(Exponent(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(keep)), coef);
  }
  return r;
}

Polynomial homogenize(const Polynomial& p, std::size_t degree) {
  Polynomial r(p.num_vars() + 1);
  for (const auto& [e, c] : p.terms()) {
    const auto d = std::accumulate(e.begin(), e.end(), std::size_t{0});
    if (d > degree) throw std::invalid_argument("homogenization degree below term degree");
    Exponent h;
    h.reserve(e.size() + 1);
    h.push_back(static_cast<std::uint32_t>(degree - d));
    h.insert(h.end(), e.begin(), e.end());
    r.add_term(h, c);
  }
  return r;
}

}  // namespace distdeg::detail
