/*
 * qamplify — quantum-classical backorder prediction library, C interface.
 *
 * All functions return a qam_status: 0 on success, 2 on usage/schema errors,
 * 3 on data errors, 4 on numeric failure. On failure qam_last_error() holds
 * a thread-local message. Strings returned through char** are heap-allocated
 * and must be released with qam_string_free().
 */
#ifndef QAMPLIFY_H
#define QAMPLIFY_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int qam_status;
#define QAM_OK 0
#define QAM_ERR_USAGE 2
#define QAM_ERR_DATA 3
#define QAM_ERR_NUMERIC 4

/* Opaque handles. */
typedef struct qam_frame qam_frame;  /* processed dataset: features + label */
typedef struct qam_model qam_model;  /* trained or freshly built model */

const char *qam_version(void);
const char *qam_last_error(void);
void qam_string_free(char *str);

/* ---- datasets ---- */

/* Loads a processed CSV (feature columns + trailing 'label' column). */
qam_status qam_frame_load_csv(const char *path, qam_frame **out_frame);
qam_status qam_frame_rows(const qam_frame *frame, size_t *out_rows);
qam_status qam_frame_class_count(const qam_frame *frame, int label,
                                 size_t *out_count);
void qam_frame_free(qam_frame *frame);

/* ---- pipeline ---- */

/*
 * Runs the full preprocessing chain on a raw backorder CSV and returns the
 * train CSV, test CSV, artifacts JSON and a summary JSON (class counts,
 * surviving feature list, warnings).
 */
qam_status qam_preprocess(const char *input_csv_path,
                          unsigned long long seed,
                          char **out_train_csv, char **out_test_csv,
                          char **out_artifacts_json, char **out_summary_json);

/* ---- model ---- */

/*
 * Trains on a 4-feature frame. config_json may be NULL for defaults; fields:
 * learning_rate, batch_size, max_epochs, patience, validation_fraction, seed.
 */
qam_status qam_train(const qam_frame *data, const char *config_json,
                     qam_model **out_model, char **out_history_csv,
                     char **out_summary_json);

qam_status qam_model_to_json(const qam_model *model, char **out_json);
qam_status qam_model_load(const char *path, qam_model **out_model);
void qam_model_free(qam_model *model);

/* Writes a metrics report JSON and an ROC points CSV (omitted when the data
 * is single-class: *out_roc_csv set to NULL with a summary warning). */
qam_status qam_evaluate(const qam_model *model, const qam_frame *data,
                        char **out_report_json, char **out_roc_csv,
                        char **out_summary_json);

/* method: "shap" | "lime". Explains p(backorder) for one row.
 * out_plot_csv (optional, may be NULL) receives "feature,value" rows. */
qam_status qam_explain(const qam_model *model, const qam_frame *data,
                       size_t row, const char *method, unsigned long long seed,
                       char **out_attribution_json, char **out_text_bars,
                       char **out_plot_csv);

/* against: "logreg" | "random" | "self". */
qam_status qam_crossval(const qam_frame *data, int folds, const char *against,
                        unsigned long long seed, char **out_result_json);

/* Debug surface: embeds 4 inputs, runs the entangling circuit, reports
 * statevectors, per-qubit expectations and class probabilities.
 * weights_json may be NULL for all-zero angles. */
qam_status qam_circuit(const char *weights_json, const double *inputs,
                       size_t n_inputs, char **out_report_text);

#ifdef __cplusplus
}
#endif

#endif /* QAMPLIFY_H */
