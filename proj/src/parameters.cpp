#include "nematoflow/parameters.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "nematoflow/error.hpp"

namespace nematoflow::material {

ParameterRule ParameterRule::constant(double c0) {
  ParameterRule r;
  r.form_ = Form::constant;
  r.c_ = {c0, 0.0, 0.0};
  return r;
}

ParameterRule ParameterRule::linear(double c0, double c1, double c2) {
  ParameterRule r;
  r.form_ = Form::linear;
  r.c_ = {c0, c1, c2};
  return r;
}

ParameterRule ParameterRule::power(double c0, double c1) {
  ParameterRule r;
  r.form_ = Form::power;
  r.c_ = {c0, c1, 0.0};
  return r;
}

ParameterRule ParameterRule::arrhenius(double c0, double c1) {
  ParameterRule r;
  r.form_ = Form::arrhenius;
  r.c_ = {c0, c1, 0.0};
  return r;
}

ParameterRule ParameterRule::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);
  if (tokens.empty()) throw PreconditionError("empty parameter rule");

  auto number = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || !std::isfinite(v)) {
      throw PreconditionError("'" + t + "' is not a number in rule '" + std::string(text) + "'");
    }
    return v;
  };
  auto coeffs = [&](std::size_t expected) {
    if (tokens.size() != expected + 1) {
      throw PreconditionError("rule '" + tokens[0] + "' takes " + std::to_string(expected) +
                              " coefficients, got '" + std::string(text) + "'");
    }
    std::array<double, 3> c{};
    for (std::size_t i = 0; i < expected; ++i) c[i] = number(tokens[i + 1]);
    return c;
  };

  const std::string& head = tokens[0];
  if (tokens.size() == 1 && head != "constant") return constant(number(head));
  if (head == "constant") return constant(coeffs(1)[0]);
  if (head == "linear") {
    auto c = coeffs(3);
    return linear(c[0], c[1], c[2]);
  }
  if (head == "power") {
    auto c = coeffs(2);
    return power(c[0], c[1]);
  }
  if (head == "arrhenius") {
    auto c = coeffs(2);
    return arrhenius(c[0], c[1]);
  }
  throw PreconditionError("unknown rule form '" + head +
                          "' (constant, linear, power, arrhenius)");
}

double ParameterRule::operator()(double theta, double tau) const {
  switch (form_) {
    case Form::constant: return c_[0];
    case Form::linear: return c_[0] + c_[1] * theta + c_[2] * tau;
    case Form::power: return c_[0] * std::pow(theta, c_[1]);
    case Form::arrhenius: return c_[0] * std::exp(c_[1] / theta);
  }
  return c_[0];
}

std::string ParameterRule::describe() const {
  std::ostringstream out;
  out.precision(17);
  switch (form_) {
    case Form::constant: out << "constant " << c_[0]; break;
    case Form::linear: out << "linear " << c_[0] << ' ' << c_[1] << ' ' << c_[2]; break;
    case Form::power: out << "power " << c_[0] << ' ' << c_[1]; break;
    case Form::arrhenius: out << "arrhenius " << c_[0] << ' ' << c_[1]; break;
  }
  return out.str();
}

const std::array<std::string_view, 10>& ParameterSet::rule_names() {
  static const std::array<std::string_view, 10> names = {
      "mu_s", "mu_b", "mu_V", "mu_D", "mu_P", "mu_L", "mu_0", "alpha_0", "alpha_1", "gamma"};
  return names;
}

namespace {

template <class Set>
auto* lookup(Set& s, std::string_view name) {
  if (name == "mu_s") return &s.mu_s;
  if (name == "mu_b") return &s.mu_b;
  if (name == "mu_V") return &s.mu_V;
  if (name == "mu_D") return &s.mu_D;
  if (name == "mu_P") return &s.mu_P;
  if (name == "mu_L") return &s.mu_L;
  if (name == "mu_0") return &s.mu_0;
  if (name == "alpha_0") return &s.alpha_0;
  if (name == "alpha_1") return &s.alpha_1;
  if (name == "gamma") return &s.gamma;
  return static_cast<decltype(&s.mu_s)>(nullptr);
}

}  // namespace

ParameterRule* ParameterSet::rule(std::string_view name) { return lookup(*this, name); }

const ParameterRule* ParameterSet::rule(std::string_view name) const {
  return lookup(*this, name);
}

Coefficients ParameterSet::at(double theta, double tau) const {
  auto eval = [&](const ParameterRule& r, std::string_view name) {
    const double v = r(theta, tau);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "parameter rule " << name << " (" << r.describe() << ") is not finite at theta="
          << theta << ", tau=" << tau;
      throw EvaluationError(msg.str());
    }
    return v;
  };
  Coefficients c;
  c.mu_s = eval(mu_s, "mu_s");
  c.mu_b = eval(mu_b, "mu_b");
  c.mu_V = eval(mu_V, "mu_V");
  c.mu_D = eval(mu_D, "mu_D");
  c.mu_P = eval(mu_P, "mu_P");
  c.mu_L = eval(mu_L, "mu_L");
  c.mu_0 = eval(mu_0, "mu_0");
  c.alpha_0 = eval(alpha_0, "alpha_0");
  c.alpha_1 = eval(alpha_1, "alpha_1");
  c.gamma = eval(gamma, "gamma");
  return c;
}

MaterialModel default_material() {
  ParameterSet p;
  p.mu_s = ParameterRule::constant(0.25);
  p.alpha_0 = ParameterRule::constant(1.0);
  p.gamma = ParameterRule::constant(0.5);
  p.rho = 1.0;
  p.n_dim = 2;
  return MaterialModel{ideal_linear(2.0, 0.5, 1.0), p};
}

}  // namespace nematoflow::material
