#pragma once

#include <memory>
#include <string>

#include "itoquad/errors.hpp"

namespace itoquad {

/// Exact integrals of an integrand over one interval:
///   m0 = int g dt,  m1 = int t*g dt,  m2 = int g^2 dt.
struct Moments {
  double m0;
  double m1;
  double m2;
};

/// Deterministic test integrand with closed-form moment integrals.
///
/// The moment formulas are analytic, never quadrature-based, so the exact
/// Ito integral sampled from them carries no discretization bias.
class Integrand {
 public:
  virtual ~Integrand() = default;

  /// Pointwise value.  Throws SingularEvaluation where the integrand is
  /// unbounded (power integrand with gamma < 0 at t = 0).
  virtual double eval(double t) const = 0;

  /// Exact (m0, m1, m2) over [t0, t1].  Requires t0 < t1; the moment
  /// integrals are finite even across the power singularity.
  virtual Moments moments(double t0, double t1) const = 0;

  virtual bool has_derivative() const { return false; }

  virtual double derivative(double) const {
    throw MissingDerivative("integrand '" + spec() + "' exposes no derivative");
  }

  /// Round-trippable spec string, e.g. "sine:lambda=42".
  virtual std::string spec() const = 0;

  double moment0(double t0, double t1) const { return moments(t0, t1).m0; }
  double moment1(double t0, double t1) const { return moments(t0, t1).m1; }
  double moment2(double t0, double t1) const { return moments(t0, t1).m2; }
};

/// g1(t) = sin(lambda * t).  lambda = 0 degenerates to the zero integrand.
class SineIntegrand final : public Integrand {
 public:
  explicit SineIntegrand(double lambda) : lambda_(lambda) {}
  double eval(double t) const override;
  Moments moments(double t0, double t1) const override;
  bool has_derivative() const override { return true; }
  double derivative(double t) const override;
  std::string spec() const override;
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

/// g2(t) = 1_{[c, inf)}(t): 0 on [0,c), 1 from c on (right continuous,
/// value 1 at t = c).  No derivative.
class JumpIntegrand final : public Integrand {
 public:
  explicit JumpIntegrand(double c);
  double eval(double t) const override;
  Moments moments(double t0, double t1) const override;
  std::string spec() const override;
  double c() const { return c_; }

 private:
  double c_;
};

/// g3(t) = t^gamma with gamma in (-1/2, 1/2] \ {0}.  Unbounded at t = 0
/// for gamma < 0; eval throws SingularEvaluation there, the moment
/// integrals remain finite because 2*gamma + 1 > 0.
class PowerIntegrand final : public Integrand {
 public:
  explicit PowerIntegrand(double gamma);
  double eval(double t) const override;
  Moments moments(double t0, double t1) const override;
  bool has_derivative() const override { return true; }
  double derivative(double t) const override;
  std::string spec() const override;
  double gamma() const { return gamma_; }

 private:
  double gamma_;
};

/// g(t) = a0 + a1 * t.  Test fixture: the trapezoidal rule integrates
/// affine functions exactly.
class AffineIntegrand final : public Integrand {
 public:
  AffineIntegrand(double a0, double a1) : a0_(a0), a1_(a1) {}
  double eval(double t) const override { return a0_ + a1_ * t; }
  Moments moments(double t0, double t1) const override;
  bool has_derivative() const override { return true; }
  double derivative(double) const override { return a1_; }
  std::string spec() const override;
  double a0() const { return a0_; }
  double a1() const { return a1_; }

 private:
  double a0_;
  double a1_;
};

AffineIntegrand affine_integrand(double a0, double a1);

/// Parse "sine:lambda=42", "jump:c=0.5", "power:gamma=-0.3",
/// "affine:a0=1,a1=-2".  Throws std::invalid_argument on anything else.
std::unique_ptr<Integrand> parse_integrand(const std::string& spec);

}  // namespace itoquad
