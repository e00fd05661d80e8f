#ifndef GAUSSMOSER_NORMS_HPP
#define GAUSSMOSER_NORMS_HPP

#include <functional>
#include <utility>

#include "gaussmoser/quadrature.hpp"
#include "gaussmoser/rearrange.hpp"
#include "gaussmoser/young.hpp"

namespace gaussmoser {

enum class NormMethod { root_find, inf_over_k, sup_grid, closed_form };

struct NormResult {
    double value = 0.0;    // +inf for functions outside the space
    double residual = 0.0; // modular at the reported value minus 1
    NormMethod method = NormMethod::root_find;
};

// int_0^1 A(scale * f) ds, +inf when divergent.
double young_modular(const YoungFunction& A, const RearrangedFunction& f,
                     double scale, const Quadrature& q = {});

// Core root-find on a monotone modular lambda -> int A(|f|/lambda).
NormResult luxemburg_norm_from_modular(
    const std::function<double(double)>& modular);

// Core minimization of k -> (1 + int A(k|f|))/k over k > 0.
NormResult orlicz_norm_via_scaled(
    const std::function<double(double)>& modular_at_scale, double seed_k = 1.0);

NormResult luxemburg_norm(const YoungFunction& A, const RearrangedFunction& f,
                          const Quadrature& q = {});
NormResult luxemburg_norm(const ConjugateYoung& A, const RearrangedFunction& f,
                          const Quadrature& q = {});

NormResult orlicz_norm_inf(const YoungFunction& A, const RearrangedFunction& f,
                           const Quadrature& q = {});
NormResult orlicz_norm_inf(const ConjugateYoung& A, const RearrangedFunction& f,
                           const Quadrature& q = {});

// |||chi_E|||_{L^A} = measure * conj(A)^{-1}(1/measure).
double char_norm(const YoungFunction& A, double measure);

// sup over (0,1) of phi**(s) / A^{-1}(1/s) (resp. phi*): log grid plus
// local refinement around the running maximum.
double marcinkiewicz_M_norm(const YoungFunction& A, const RearrangedFunction& f,
                            const Quadrature& q = {});
double marcinkiewicz_m_norm(const YoungFunction& A, const RearrangedFunction& f,
                            const Quadrature& q = {});

// lhs = int f g, rhs = ||f||_{L^A} * |||g|||_{L^{conj A}}.
std::pair<double, double> holder_pair(const YoungFunction& A,
                                      const RearrangedFunction& f,
                                      const RearrangedFunction& g,
                                      const Quadrature& q = {});

// int_0^1 |f g| ds with shell handling at both endpoints.
double unit_inner_product(const RearrangedFunction& f,
                          const RearrangedFunction& g,
                          const Quadrature& q = {});

} // namespace gaussmoser

#endif
