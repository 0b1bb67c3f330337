/* Copyright 2026 squid-cphase Contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef SQUID_CPHASE_H
#define SQUID_CPHASE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum ScStatus {
  SC_STATUS_OK = 0,
  SC_STATUS_NULL_POINTER = 1,
  SC_STATUS_INVALID_ARGUMENT = 2,
  SC_STATUS_CONFIG = 3,
  SC_STATUS_TRUNCATION = 4,
  SC_STATUS_NOT_CONVERGED = 5,
  SC_STATUS_BUFFER_TOO_SMALL = 6,
  SC_STATUS_INTERNAL = 7,
  SC_STATUS_PANIC = 8,
} ScStatus;

// Photon energy quantum in the coupling formula.
typedef enum ScEnergyQuantum {
  SC_ENERGY_QUANTUM_PLANCK_NU = 0,
  SC_ENERGY_QUANTUM_HBAR_NU = 1,
} ScEnergyQuantum;

// Opaque gate extraction result.
typedef struct ScGateReport ScGateReport;

// Opaque gate schedule.
typedef struct ScSchedule ScSchedule;

// SQUID circuit parameters, SI units; `flux_bias` in flux quanta.
typedef struct ScSquidParams {
  double capacitance;
  double inductance;
  double beta_l;
  double flux_bias;
} ScSquidParams;

// Lowest three levels of one SQUID.
typedef struct ScSpectrum {
  double energies_j[3];
  double nu_01_hz;
  double nu_02_hz;
  double nu_12_hz;
  double phi_01;
  double phi_02;
  double phi_12;
  // Largest relative frequency shift under grid refinement, or -1 when
  // refinement was not run.
  double max_relative_shift;
  bool lambda_type;
} ScSpectrum;

typedef struct ScResonator {
  double frequency_hz;
  double wavelength;
  double length;
  double inductance_per_length;
  double quality_factor;
} ScResonator;

typedef struct ScPlacement {
  double mutual_inductance;
  double position;
  double phi_02;
  double loop_inductance;
} ScPlacement;

typedef struct ScBudgetParams {
  double gamma2_inv;
  double kappa_inv;
  double tau_a;
  double tau_uw;
} ScBudgetParams;

// Time budget summary; per-SQUID `tau_r` is not included.
typedef struct ScTimeBudget {
  double tau_total;
  double tau_total_closed_form;
  double gamma2_margin;
  double kappa_margin;
  bool pass;
} ScTimeBudget;

typedef struct ScCrosstalk {
  double mutual_inductance;
  double loop_inductance;
  double loop_inductance_next;
  double phi_max;
  double g_min;
  double rabi;
} ScCrosstalk;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until
// the next failing call on the same thread.
const char *sc_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *sc_version(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void sc_string_free(char *s);

// Builds the `2n + 1` step controlled phase schedule.
//
// # Safety
// `couplings` must point to `n` doubles; `out` must be writable.
enum ScStatus sc_schedule_cphase(size_t n,
                                 const double *couplings,
                                 double rabi,
                                 double retune_time,
                                 struct ScSchedule **out);

// Builds the `2n + 3` step CNOT schedule (Hadamards on SQUID `n`).
//
// # Safety
// `couplings` must point to `n` doubles; `out` must be writable.
enum ScStatus sc_schedule_cnot(size_t n,
                               const double *couplings,
                               double rabi,
                               double hadamard_rabi,
                               double retune_time,
                               struct ScSchedule **out);

// Parses a schedule from its JSON form.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum ScStatus sc_schedule_from_json(const char *json, struct ScSchedule **out);

// JSON form of a schedule; free with [`sc_string_free`].
//
// # Safety
// `schedule` must be a live handle; `out` must be writable.
enum ScStatus sc_schedule_to_json(const struct ScSchedule *schedule, char **out);

// Number of steps, or 0 for NULL.
//
// # Safety
// `schedule` must be NULL or a live handle.
size_t sc_schedule_step_count(const struct ScSchedule *schedule);

// Wall-clock duration in seconds, or NaN for NULL.
//
// # Safety
// `schedule` must be NULL or a live handle.
double sc_schedule_total_time(const struct ScSchedule *schedule);

// # Safety
// `schedule` must be NULL or a handle not yet freed.
void sc_schedule_free(struct ScSchedule *schedule);

// Runs computational input `bits` (SQUID 1 is the most significant bit)
// and writes the final amplitudes, `(n_max + 1) 3^n` of them.
//
// # Safety
// `re` and `im` must each hold `len` doubles.
enum ScStatus sc_run_basis_input(const struct ScSchedule *schedule,
                                 size_t n_max,
                                 uint64_t bits,
                                 double *re,
                                 double *im,
                                 size_t len);

// Effective gate on the qubit subspace with leakage diagnostics.
//
// # Safety
// `schedule` must be a live handle; `out` must be writable.
enum ScStatus sc_extract_gate(const struct ScSchedule *schedule,
                              size_t n_max,
                              struct ScGateReport **out);

// Side length `2^n` of the gate matrix, or 0 for NULL.
//
// # Safety
// `report` must be NULL or a live handle.
size_t sc_gate_report_dim(const struct ScGateReport *report);

// One gate entry `<row|U|col>`.
//
// # Safety
// `report` must be a live handle; `re` and `im` must be writable.
enum ScStatus sc_gate_report_entry(const struct ScGateReport *report,
                                   size_t row,
                                   size_t col,
                                   double *re,
                                   double *im);

// Phase-insensitive fidelity, or NaN for NULL.
//
// # Safety
// `report` must be NULL or a live handle.
double sc_gate_report_fidelity(const struct ScGateReport *report);

// Truth-table verdict against the schedule's target gate.
//
// # Safety
// `report` must be a live handle; outputs must be writable.
enum ScStatus sc_gate_report_truth_table(const struct ScGateReport *report,
                                         bool *pass,
                                         double *max_error);

// Largest final photon population and largest final `|2>` population.
//
// # Safety
// `report` must be a live handle; outputs must be writable.
enum ScStatus sc_gate_report_leakage(const struct ScGateReport *report,
                                     double *vacuum_return,
                                     double *level_two_residual);

// # Safety
// `report` must be NULL or a handle not yet freed.
void sc_gate_report_free(struct ScGateReport *report);

// Solves the SQUID spectrum on `grid_points` interior points (0 selects
// the default) with refinement.
//
// # Safety
// `params` must be readable and `out` writable.
enum ScStatus sc_solve_spectrum(const struct ScSquidParams *params,
                                size_t grid_points,
                                struct ScSpectrum *out);

// Magnitude of the SQUID-resonator coupling, rad/s.
//
// # Safety
// Pointers must be readable / writable as named.
enum ScStatus sc_coupling_g(const struct ScResonator *res,
                            const struct ScPlacement *place,
                            enum ScEnergyQuantum quantum,
                            double *out);

// `Q / (2 pi nu_r)` in seconds, or NaN for NULL.
//
// # Safety
// `res` must be NULL or readable.
double sc_photon_lifetime(const struct ScResonator *res);

// Rabi frequency (rad/s) for a microwave flux amplitude (Wb).
double sc_rabi_from_flux(double loop_inductance, double phi_12, double flux_amplitude);

// Flux amplitude (Wb) giving Rabi frequency `rabi` (rad/s).
double sc_flux_for_rabi(double loop_inductance, double phi_12, double rabi);

// Gate time budget for `n` SQUIDs.
//
// # Safety
// `couplings` must point to `n` doubles; other pointers as named.
enum ScStatus sc_time_budget(size_t n,
                             const double *couplings,
                             const struct ScBudgetParams *budget,
                             double margin_threshold,
                             struct ScTimeBudget *out);

// Direct-coupling figure of merit between neighbouring SQUIDs.
//
// # Safety
// `cross` must be readable and `out` writable.
enum ScStatus sc_zeta(const struct ScCrosstalk *cross, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SQUID_CPHASE_H */
