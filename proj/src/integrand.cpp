#include "itoquad/integrand.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace itoquad {

namespace {

std::string fmt_param(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------- sine

double SineIntegrand::eval(double t) const { return std::sin(lambda_ * t); }

double SineIntegrand::derivative(double t) const {
  return lambda_ * std::cos(lambda_ * t);
}

Moments SineIntegrand::moments(double t0, double t1) const {
  if (!(t0 < t1)) throw std::invalid_argument("moments: need t0 < t1");
  if (lambda_ == 0.0) return {0.0, 0.0, 0.0};
  const double l = lambda_;
  // int sin(lt) dt = -cos(lt)/l
  const double m0 = (std::cos(l * t0) - std::cos(l * t1)) / l;
  // int t sin(lt) dt = sin(lt)/l^2 - t cos(lt)/l
  auto anti1 = [l](double t) {
    return std::sin(l * t) / (l * l) - t * std::cos(l * t) / l;
  };
  const double m1 = anti1(t1) - anti1(t0);
  // int sin^2(lt) dt = t/2 - sin(2lt)/(4l)
  auto anti2 = [l](double t) { return 0.5 * t - std::sin(2.0 * l * t) / (4.0 * l); };
  const double m2 = anti2(t1) - anti2(t0);
  return {m0, m1, m2};
}

std::string SineIntegrand::spec() const { return "sine:lambda=" + fmt_param(lambda_); }

// ---------------------------------------------------------------- jump

JumpIntegrand::JumpIntegrand(double c) : c_(c) {
  if (!(c > 0.0)) throw std::invalid_argument("jump integrand: need c > 0");
}

double JumpIntegrand::eval(double t) const { return t >= c_ ? 1.0 : 0.0; }

Moments JumpIntegrand::moments(double t0, double t1) const {
  if (!(t0 < t1)) throw std::invalid_argument("moments: need t0 < t1");
  const double lo = std::max(t0, c_);  // integrand vanishes below c
  if (lo >= t1) return {0.0, 0.0, 0.0};
  const double m0 = t1 - lo;
  const double m1 = 0.5 * (t1 * t1 - lo * lo);
  return {m0, m1, m0};
}

std::string JumpIntegrand::spec() const { return "jump:c=" + fmt_param(c_); }

// ---------------------------------------------------------------- power

PowerIntegrand::PowerIntegrand(double gamma) : gamma_(gamma) {
  if (!(gamma > -0.5) || !(gamma <= 0.5) || gamma == 0.0)
    throw std::invalid_argument("power integrand: need gamma in (-1/2, 1/2], gamma != 0");
}

double PowerIntegrand::eval(double t) const {
  if (t == 0.0 && gamma_ < 0.0)
    throw SingularEvaluation("power integrand with gamma < 0 is unbounded at t = 0");
  return std::pow(t, gamma_);
}

double PowerIntegrand::derivative(double t) const {
  // gamma * t^(gamma-1); the exponent is negative for every admissible
  // gamma, so t = 0 is always singular here.
  if (t == 0.0)
    throw SingularEvaluation("derivative of t^gamma is unbounded at t = 0");
  return gamma_ * std::pow(t, gamma_ - 1.0);
}

Moments PowerIntegrand::moments(double t0, double t1) const {
  if (!(t0 < t1)) throw std::invalid_argument("moments: need t0 < t1");
  const double g = gamma_;
  auto pw = [](double t, double e) { return t == 0.0 ? 0.0 : std::pow(t, e); };
  const double m0 = (pw(t1, g + 1.0) - pw(t0, g + 1.0)) / (g + 1.0);
  const double m1 = (pw(t1, g + 2.0) - pw(t0, g + 2.0)) / (g + 2.0);
  const double m2 = (pw(t1, 2.0 * g + 1.0) - pw(t0, 2.0 * g + 1.0)) / (2.0 * g + 1.0);
  return {m0, m1, m2};
}

std::string PowerIntegrand::spec() const { return "power:gamma=" + fmt_param(gamma_); }

// ---------------------------------------------------------------- affine

Moments AffineIntegrand::moments(double t0, double t1) const {
  if (!(t0 < t1)) throw std::invalid_argument("moments: need t0 < t1");
  const double d1 = t1 - t0;
  const double d2 = t1 * t1 - t0 * t0;
  const double d3 = t1 * t1 * t1 - t0 * t0 * t0;
  const double m0 = a0_ * d1 + 0.5 * a1_ * d2;
  const double m1 = 0.5 * a0_ * d2 + a1_ * d3 / 3.0;
  const double m2 = a0_ * a0_ * d1 + a0_ * a1_ * d2 + a1_ * a1_ * d3 / 3.0;
  return {m0, m1, m2};
}

std::string AffineIntegrand::spec() const {
  return "affine:a0=" + fmt_param(a0_) + ",a1=" + fmt_param(a1_);
}

AffineIntegrand affine_integrand(double a0, double a1) { return {a0, a1}; }

// ---------------------------------------------------------------- parsing

namespace {

// "a0=1,a1=-2" -> {{"a0","1"},{"a1","-2"}}
std::map<std::string, std::string> parse_kv(const std::string& s) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("integrand spec: expected key=value, got '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

double to_double(const std::string& key, const std::map<std::string, std::string>& kv) {
  const auto it = kv.find(key);
  if (it == kv.end())
    throw std::invalid_argument("integrand spec: missing parameter '" + key + "'");
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(it->second, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("integrand spec: bad number '" + it->second + "'");
  }
  if (pos != it->second.size())
    throw std::invalid_argument("integrand spec: bad number '" + it->second + "'");
  return v;
}

}  // namespace

std::unique_ptr<Integrand> parse_integrand(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const auto kv = parse_kv(rest);

  if (kind == "sine") return std::make_unique<SineIntegrand>(to_double("lambda", kv));
  if (kind == "jump") return std::make_unique<JumpIntegrand>(to_double("c", kv));
  if (kind == "power") return std::make_unique<PowerIntegrand>(to_double("gamma", kv));
  if (kind == "affine")
    return std::make_unique<AffineIntegrand>(to_double("a0", kv), to_double("a1", kv));
  throw std::invalid_argument("unknown integrand kind '" + kind + "'");
}

}  // namespace itoquad
