#include "fppu/tools/optk.hpp"

#include <memory>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_multimin.h>

namespace fppu::tools {
namespace {

struct KPair {
  double k1, k2;
};

double squared_error(double x, void* p) {
  const auto* k = static_cast<const KPair*>(p);
  const double r = seed_relative_error(x, k->k1, k->k2);
  return r * r;
}

double objective(const gsl_vector* v, void*) { return seed_error_integral(gsl_vector_get(v, 0), gsl_vector_get(v, 1)); }

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

}  // namespace

double seed_relative_error(double x, double k1, double k2) {
  const double b = k1 - x;
  return x * 4.0 * (k2 - x * b) * b - 1.0;
}

double seed_error_integral(double k1, double k2) {
  constexpr std::size_t kLimit = 1000;
  static thread_local std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws{
      gsl_integration_workspace_alloc(kLimit)};
  KPair k{k1, k2};
  gsl_function f{&squared_error, &k};
  double result = 0.0, abserr = 0.0;
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  const int status = gsl_integration_qag(&f, 0.5, 1.0, 1e-12, 0.0, kLimit, GSL_INTEG_GAUSS61, ws.get(), &result, &abserr);
  gsl_set_error_handler(old);
  if (status != GSL_SUCCESS) throw std::runtime_error(std::string("quadrature failed: ") + gsl_strerror(status));
  return result;
}

OptkResult optimize_k(const OptkOptions& options) {
  std::unique_ptr<gsl_vector, VectorDeleter> x{gsl_vector_alloc(2)}, step{gsl_vector_alloc(2)};
  gsl_vector_set(x.get(), 0, options.start_k1);
  gsl_vector_set(x.get(), 1, options.start_k2);
  gsl_vector_set_all(step.get(), options.step);

  gsl_multimin_function fn{&objective, 2, nullptr};
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m{
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2)};
  gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), step.get());

  OptkResult r;
  for (r.iterations = 1; r.iterations <= options.max_iterations; ++r.iterations) {
    if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), options.size_tolerance) == GSL_SUCCESS) {
      r.converged = true;
      break;
    }
  }
  const gsl_vector* best = gsl_multimin_fminimizer_x(m.get());
  r.k1 = gsl_vector_get(best, 0);
  r.k2 = gsl_vector_get(best, 1);
  r.e2 = gsl_multimin_fminimizer_minimum(m.get());
  return r;
}

}  // namespace fppu::tools
