#ifndef CROWN_H
#define CROWN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CrownStatus {
  CrownStatus_Ok = 0,
  CrownStatus_InvalidInput = 1,
  CrownStatus_Domain = 2,
  CrownStatus_Validation = 3,
  CrownStatus_ChartEscape = 4,
  CrownStatus_Numeric = 5,
  CrownStatus_Conditioning = 6,
  CrownStatus_Unsupported = 7,
  CrownStatus_NullPointer = 8,
  CrownStatus_Panic = 9,
} CrownStatus;

typedef enum CrownSide {
  CrownSide_X = 0,
  CrownSide_Xbar = 1,
} CrownSide;

typedef enum CrownClosureLabel {
  CrownClosureLabel_Interior = 0,
  CrownClosureLabel_Boundary = 1,
  CrownClosureLabel_Outside = 2,
} CrownClosureLabel;

typedef enum CrownConeLabel {
  CrownConeLabel_InteriorW = 0,
  CrownConeLabel_BoundaryW = 1,
  CrownConeLabel_Outside = 2,
} CrownConeLabel;

/**
 * Class `[g, (y1, y2)]` in the cone bundle.
 */
typedef struct CrownConePoint CrownConePoint;

/**
 * Point of the Lagrangian Grassmannian.
 */
typedef struct CrownLagrangian CrownLagrangian;

/**
 * Element of `Sp(n, R)` or `Sp(n, C)`.
 */
typedef struct CrownSymplectic CrownSymplectic;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread; empty after a success.
 * Valid until the next call into the library from the same thread.
 */
const char *crown_last_error(void);

const char *crown_version(void);

/**
 * Validates a `2n × 2n` matrix; `im` may be null.
 *
 * # Safety
 * `re` (and `im` if non-null) must point to `4n²` doubles; `out` must be writable.
 */
enum CrownStatus crown_symplectic_validate(uintptr_t n,
                                           const double *re,
                                           const double *im,
                                           double tol,
                                           struct CrownSymplectic **out);

/**
 * # Safety
 * `g` must be null or a handle from this library not yet freed.
 */
void crown_symplectic_free(struct CrownSymplectic *g);

/**
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum CrownStatus crown_symplectic_residual(const struct CrownSymplectic *g, double *out);

/**
 * `g · z = (az + b)(cz + d)⁻¹` for an `n × n` complex symmetric `z`.
 *
 * # Safety
 * Input arrays hold `n²` doubles (`z_im` may be null); outputs are writable for `n²` doubles.
 */
enum CrownStatus crown_moebius(const struct CrownSymplectic *g,
                               const double *z_re,
                               const double *z_im,
                               double tol,
                               double *out_re,
                               double *out_im);

/**
 * Lagrangian spanned by the columns of a `2n × n` frame; `im` may be null.
 *
 * # Safety
 * `re` (and `im` if non-null) hold `2n²` doubles; `out` writable.
 */
enum CrownStatus crown_lagrangian_from_frame(uintptr_t n,
                                             const double *re,
                                             const double *im,
                                             struct CrownLagrangian **out);

/**
 * `{(Tv, v)}` for complex symmetric `T`.
 *
 * # Safety
 * `re` (and `im` if non-null) hold `n²` doubles; `out` writable.
 */
enum CrownStatus crown_lagrangian_graph(uintptr_t n,
                                        const double *re,
                                        const double *im,
                                        struct CrownLagrangian **out);

/**
 * # Safety
 * `l` must be null or a live handle.
 */
void crown_lagrangian_free(struct CrownLagrangian *l);

/**
 * `n` for a Lagrangian in `C^{2n}`; 0 for a null handle.
 *
 * # Safety
 * `l` must be null or a live handle.
 */
uintptr_t crown_lagrangian_dim(const struct CrownLagrangian *l);

/**
 * Copies the orthonormal `2n × n` frame.
 *
 * # Safety
 * `l` live; outputs writable for `2n²` doubles each.
 */
enum CrownStatus crown_lagrangian_frame(const struct CrownLagrangian *l,
                                        double *out_re,
                                        double *out_im);

/**
 * Subspace distance: sine of the largest principal angle.
 *
 * # Safety
 * Handles live; `out` writable.
 */
enum CrownStatus crown_lagrangian_distance(const struct CrownLagrangian *a,
                                           const struct CrownLagrangian *b,
                                           double *out);

/**
 * # Safety
 * Handles live; `out` writable.
 */
enum CrownStatus crown_act(const struct CrownSymplectic *g,
                           const struct CrownLagrangian *l,
                           struct CrownLagrangian **out);

/**
 * # Safety
 * Handles live; outputs writable (either may be null to skip).
 */
enum CrownStatus crown_transversal(const struct CrownLagrangian *a,
                                   const struct CrownLagrangian *b,
                                   double tol,
                                   bool *out_transversal,
                                   double *out_sigma_min);

/**
 * # Safety
 * `l` live; `out` writable.
 */
enum CrownStatus crown_classify_closure(const struct CrownLagrangian *l,
                                        enum CrownSide side,
                                        double boundary_tol,
                                        enum CrownClosureLabel *out);

/**
 * Position of a real symmetric `n × n` matrix relative to the PSD cone.
 *
 * # Safety
 * `s` holds `n²` doubles; `out` writable.
 */
enum CrownStatus crown_classify_cone(uintptr_t n,
                                     const double *s,
                                     double tol,
                                     enum CrownConeLabel *out);

/**
 * `Z = U diag(sigma) Uᵀ` with `U` unitary and `sigma` descending.
 *
 * # Safety
 * Inputs hold `n²` doubles (`im` may be null); `u_re`, `u_im` writable for `n²`, `sigma` for `n`.
 */
enum CrownStatus crown_takagi(uintptr_t n,
                              const double *re,
                              const double *im,
                              double tol,
                              double *u_re,
                              double *u_im,
                              double *sigma);

/**
 * `[g, (y1, y2)]`; `g` may be null for the identity.
 *
 * # Safety
 * `g` null or live; `y1`, `y2` hold `n²` doubles; `out` writable.
 */
enum CrownStatus crown_cone_point_new(const struct CrownSymplectic *g,
                                      uintptr_t n,
                                      const double *y1,
                                      const double *y2,
                                      double tol,
                                      struct CrownConePoint **out);

/**
 * # Safety
 * `p` must be null or a live handle.
 */
void crown_cone_point_free(struct CrownConePoint *p);

/**
 * `n` of the point; 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
uintptr_t crown_cone_point_dim(const struct CrownConePoint *p);

/**
 * Copies the representative: `g` (`2n × 2n`, real), `y1`, `y2` (`n × n`).
 * Any output may be null to skip it.
 *
 * # Safety
 * `p` live; non-null outputs writable for the stated sizes.
 */
enum CrownStatus crown_cone_point_get(const struct CrownConePoint *p,
                                      double *g,
                                      double *y1,
                                      double *y2);

/**
 * Interior map `[g, y] ↦ (g·iy1, g·(iy2)⁻¹)`.
 *
 * # Safety
 * `p` live; outputs writable for `n²` doubles each.
 */
enum CrownStatus crown_interior_map(const struct CrownConePoint *p,
                                    double tol,
                                    double *z_re,
                                    double *z_im,
                                    double *w_re,
                                    double *w_im);

/**
 * Boundary map to a pair of Lagrangians; the point must lie over `∂C`.
 *
 * # Safety
 * `p` live; outputs writable.
 */
enum CrownStatus crown_boundary_map(const struct CrownConePoint *p,
                                    struct CrownLagrangian **out_l1,
                                    struct CrownLagrangian **out_l2);

/**
 * Preimage of `(z, w)` in the open crown under the interior map.
 *
 * # Safety
 * Inputs hold `n²` doubles (imaginary parts may not be null here); `out` writable.
 */
enum CrownStatus crown_resolve_interior(uintptr_t n,
                                        const double *z_re,
                                        const double *z_im,
                                        const double *w_re,
                                        const double *w_im,
                                        double tol,
                                        struct CrownConePoint **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CROWN_H */
