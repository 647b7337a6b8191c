#include "fracsys/mittag_leffler.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <mpfr.h>

#include "fracsys/errors.h"
#include "fracsys/expansion.h"

namespace fracsys {
namespace {

constexpr long kMaxSeriesBits = 4096;

struct Attempt {
  Vector coefficients;
  int terms = 0;
  double relative_error = 0.0;
  // Weighted absolute sum over the smaller of the weighted result and the
  // leading term; sizes the next precision. A result that is pure rounding
  // noise is no guide, and E rarely falls far below its leading term.
  double growth = 1.0;
};

struct Plan {
  std::vector<double> weight;
  int hump = 0;
};

Plan make_plan(const Vector& base, double alpha, double t,
               const SeriesOptions& options) {
  const int d = static_cast<int>(base.size());
  const double z = (t == 0.0) ? 0.0 : std::pow(t, alpha);
  const double radius = root_bound(base) * z;
  Plan plan;
  plan.weight.assign(d, 1.0);
  for (int l = 1; l < d; ++l) plan.weight[l] = plan.weight[l - 1] * radius;
  const double hump =
      radius > 0.0 ? std::ceil(std::pow(radius, 1.0 / alpha) / alpha) : 0.0;
  if (!(hump <= options.max_terms)) {
    std::ostringstream os;
    os << "series hump near term " << hump << " exceeds the "
       << options.max_terms << "-term budget at t = " << t;
    fail(ErrorCode::kSeriesDivergence, os.str());
  }
  plan.hump = std::max(d, static_cast<int>(hump) + 10);
  return plan;
}

[[noreturn]] void too_many_terms(int terms, double t) {
  std::ostringstream os;
  os << "series did not converge within " << terms << " terms at t = " << t;
  fail(ErrorCode::kSeriesDivergence, os.str());
}

double rounding_ratio(double eps, double abs_size, double sum_size) {
  const double rounding = 4.0 * eps * abs_size;
  const double ratio = (sum_size > 0.0) ? rounding / sum_size
                       : (rounding > 0.0 ? HUGE_VAL : 0.0);
  return std::isfinite(ratio) ? ratio : HUGE_VAL;
}

Attempt sum_double(const Vector& base, double alpha, double beta, double t,
                   const Plan& plan, const SeriesOptions& options) {
  const int d = static_cast<int>(base.size());
  const double z = (t == 0.0) ? 0.0 : std::pow(t, alpha);

  // Polynomial of zA: (zA)^d = sum_k base_k z^(d-k) (zA)^k.
  Vector scaled(d);
  for (int k = 0; k < d; ++k) scaled(k) = base(k) * std::pow(z, d - k);

  Vector term = Vector::Zero(d);
  Vector sum = Vector::Zero(d);
  Vector magnitude = Vector::Zero(d);
  term(0) = 1.0 / std::tgamma(beta);
  const double first_size = std::abs(term(0));

  int small_run = 0;
  int i = 0;
  for (;; ++i) {
    double term_size = 0.0;
    double sum_size = 0.0;
    sum += term;
    magnitude += term.cwiseAbs();
    for (int l = 0; l < d; ++l) {
      term_size += plan.weight[l] * std::abs(term(l));
      sum_size += plan.weight[l] * std::abs(sum(l));
    }
    small_run = (term_size <= options.tol * sum_size) ? small_run + 1 : 0;
    if (small_run >= 3 && i >= plan.hump) break;
    if (!std::isfinite(term_size)) break;
    if (i + 1 >= options.max_terms) too_many_terms(i + 1, t);
    const double lead = term(d - 1);
    for (int l = d - 1; l >= 1; --l) term(l) = term(l - 1) + lead * scaled(l);
    term(0) = lead * scaled(0);
    term *= boost::math::tgamma_delta_ratio(alpha * i + beta, alpha);
  }

  Attempt out;
  out.terms = i + 1;
  out.coefficients.resize(d);
  double z_power = 1.0;
  double abs_size = 0.0;
  double sum_size = 0.0;
  for (int l = 0; l < d; ++l) {
    out.coefficients(l) = sum(l) * z_power;
    z_power *= z;
    abs_size += plan.weight[l] * magnitude(l);
    sum_size += plan.weight[l] * std::abs(sum(l));
  }
  out.relative_error = rounding_ratio(
      std::numeric_limits<double>::epsilon(), abs_size, sum_size);
  out.growth = abs_size / std::min(sum_size, first_size);
  return out;
}

class MpVector {
 public:
  MpVector(int size, mpfr_prec_t bits) : data_(size) {
    for (auto& v : data_) {
      mpfr_init2(&v, bits);
      mpfr_set_zero(&v, 1);
    }
  }
  ~MpVector() {
    for (auto& v : data_) mpfr_clear(&v);
  }
  MpVector(const MpVector&) = delete;
  MpVector& operator=(const MpVector&) = delete;

  mpfr_ptr operator[](int i) { return &data_[i]; }

 private:
  std::vector<__mpfr_struct> data_;
};

Attempt sum_mpfr(const Vector& base, double alpha, double beta, double t,
                 const Plan& plan, const SeriesOptions& options,
                 mpfr_prec_t bits) {
  const int d = static_cast<int>(base.size());
  // Scratch: 0 z, 1 z^l, 2 Gamma argument, 3 1/Gamma, 4 lead, 5 product.
  MpVector s(6, bits);
  MpVector scaled(d, bits);
  MpVector power(d, bits);  // (zA)^i e_0 in the reduced basis
  MpVector sum(d, bits);
  MpVector magnitude(d, bits);
  mpfr_ptr z = s[0], zl = s[1], arg = s[2], inv = s[3], lead = s[4],
           prod = s[5];

  if (t == 0.0) {
    mpfr_set_zero(z, 1);
  } else {
    mpfr_set_d(prod, t, MPFR_RNDN);
    mpfr_set_d(arg, alpha, MPFR_RNDN);
    mpfr_pow(z, prod, arg, MPFR_RNDN);
  }
  for (int k = 0; k < d; ++k) {
    mpfr_pow_ui(zl, z, static_cast<unsigned long>(d - k), MPFR_RNDN);
    mpfr_mul_d(scaled[k], zl, base(k), MPFR_RNDN);
  }
  mpfr_set_ui(power[0], 1, MPFR_RNDN);

  double first_size = 0.0;
  int small_run = 0;
  int i = 0;
  for (;; ++i) {
    mpfr_set_d(arg, alpha, MPFR_RNDN);
    mpfr_mul_ui(arg, arg, static_cast<unsigned long>(i), MPFR_RNDN);
    mpfr_add_d(arg, arg, beta, MPFR_RNDN);
    mpfr_gamma(inv, arg, MPFR_RNDN);
    mpfr_ui_div(inv, 1, inv, MPFR_RNDN);
    if (i == 0) first_size = std::abs(mpfr_get_d(inv, MPFR_RNDN));

    double term_size = 0.0;
    double sum_size = 0.0;
    for (int l = 0; l < d; ++l) {
      mpfr_mul(prod, power[l], inv, MPFR_RNDN);
      mpfr_add(sum[l], sum[l], prod, MPFR_RNDN);
      mpfr_abs(prod, prod, MPFR_RNDN);
      mpfr_add(magnitude[l], magnitude[l], prod, MPFR_RNDN);
      term_size += plan.weight[l] * mpfr_get_d(prod, MPFR_RNDN);
      sum_size += plan.weight[l] * std::abs(mpfr_get_d(sum[l], MPFR_RNDN));
    }
    small_run = (term_size <= options.tol * sum_size) ? small_run + 1 : 0;
    if (small_run >= 3 && i >= plan.hump) break;
    if (i + 1 >= options.max_terms) too_many_terms(i + 1, t);

    mpfr_set(lead, power[d - 1], MPFR_RNDN);
    for (int l = d - 1; l >= 1; --l) {
      mpfr_mul(prod, lead, scaled[l], MPFR_RNDN);
      mpfr_add(power[l], power[l - 1], prod, MPFR_RNDN);
    }
    mpfr_mul(power[0], lead, scaled[0], MPFR_RNDN);
  }

  Attempt out;
  out.terms = i + 1;
  out.coefficients.resize(d);
  mpfr_set_ui(zl, 1, MPFR_RNDN);
  double abs_size = 0.0;
  double sum_size = 0.0;
  for (int l = 0; l < d; ++l) {
    mpfr_mul(prod, sum[l], zl, MPFR_RNDN);
    out.coefficients(l) = mpfr_get_d(prod, MPFR_RNDN);
    mpfr_mul(zl, zl, z, MPFR_RNDN);
    abs_size += plan.weight[l] * mpfr_get_d(magnitude[l], MPFR_RNDN);
    sum_size += plan.weight[l] * std::abs(mpfr_get_d(sum[l], MPFR_RNDN));
  }
  out.relative_error =
      rounding_ratio(std::ldexp(1.0, 1 - static_cast<int>(bits)), abs_size,
                     sum_size);
  out.growth = abs_size / std::min(sum_size, first_size);
  return out;
}

}  // namespace

Vector mittag_leffler_coefficients(const PowerReduction& reduction,
                                   double alpha, double beta, double t,
                                   const SeriesOptions& options,
                                   SeriesReport* report) {
  if (!(alpha > 0.0)) fail(ErrorCode::kInvalidArgument, "alpha must be > 0");
  if (!(beta > 0.0)) fail(ErrorCode::kInvalidArgument, "beta must be > 0");
  if (!(t >= 0.0) || !std::isfinite(t)) {
    fail(ErrorCode::kInvalidArgument, "t must be finite and nonnegative");
  }
  const Vector& base = reduction.base();
  const Plan plan = make_plan(base, alpha, t, options);

  Attempt attempt = sum_double(base, alpha, beta, t, plan, options);
  int digits = 16;
  if (attempt.relative_error > options.cancellation_tol) {
    // Bits to absorb the cancellation, plus the target accuracy and a
    // margin. A double sum that is all rounding noise understates the
    // growth, so each wider pass re-derives it from its own sums.
    const auto bits_for = [&](double growth) {
      if (!std::isfinite(growth)) return 2 * kMaxSeriesBits;
      return static_cast<long>(std::ceil(
          std::log2(std::max(growth, 1.0)) -
          std::log2(options.cancellation_tol) + 40));
    };
    long bits = std::max(128L, bits_for(attempt.growth));
    for (;;) {
      if (bits > kMaxSeriesBits) {
        std::ostringstream os;
        os << "cancellation in the Mittag-Leffler series at t = " << t
           << " exceeds " << kMaxSeriesBits << "-bit arithmetic after "
           << attempt.terms << " terms";
        fail(ErrorCode::kSeriesDivergence, os.str());
      }
      attempt = sum_mpfr(base, alpha, beta, t, plan, options, bits);
      digits = static_cast<int>(std::floor(bits * std::log10(2.0)));
      if (attempt.relative_error <= options.cancellation_tol) break;
      bits = std::max(2 * bits, bits_for(attempt.growth));
    }
  }
  if (report != nullptr) {
    report->terms = attempt.terms;
    report->digits = digits;
  }
  return attempt.coefficients;
}

double mittag_leffler(double alpha, double beta, double x,
                      const SeriesOptions& options) {
  const PowerReduction scalar(Vector::Constant(1, x), 1);
  return mittag_leffler_coefficients(scalar, alpha, beta, 1.0, options)(0);
}

}  // namespace fracsys
