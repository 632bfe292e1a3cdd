#ifndef PKTSEG_METRICS_SUMMARY_HPP
#define PKTSEG_METRICS_SUMMARY_HPP

#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pktseg/errors.hpp"
#include "pktseg/metrics/stats.hpp"
#include "pktseg/metrics/wilcoxon.hpp"

namespace pktseg::metrics {

/// Per-case evaluation result. hd95 is absent when either mask is empty;
/// fpe/fne are absent when their denominator mask is empty. Absent metrics
/// stay absent in reports (never coerced to 0).
struct MetricsRow {
    std::string study_id;
    double dice = 0.0;
    std::optional<double> hd95_mm;
    std::optional<double> fpe;
    std::optional<double> fne;
};

struct SummaryRow {
    std::string model_name;
    int cases = 0;
    double dice_mean = 0, dice_std = 0, dice_median = 0;
    std::optional<double> dice_p;      // absent for the reference row
    std::string dice_label = "-";      // "-", "NS", "*", "**", "***"
    double hd95_mean = 0, hd95_std = 0, hd95_median = 0;
    std::optional<double> hd95_p;
    std::string hd95_label = "-";
};

/// Star labels at the 0.05 / 0.01 / 0.001 thresholds.
inline std::string significance_label(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "NS";
}

namespace detail {

inline std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

/// Paired values of one metric for two models over the shared case set;
/// pairs where either side is absent are dropped.
template <typename Getter>
inline std::pair<std::vector<double>, std::vector<double>> paired_metric(
    const std::vector<MetricsRow>& model_rows, const std::vector<MetricsRow>& ref_rows,
    Getter get) {
    std::map<std::string, const MetricsRow*> by_id;
    for (const auto& r : ref_rows) by_id[r.study_id] = &r;
    std::vector<double> xs, ys;
    for (const auto& r : model_rows) {
        const auto it = by_id.find(r.study_id);
        if (it == by_id.end()) continue;
        const auto x = get(r);
        const auto y = get(*it->second);
        if (x && y) {
            xs.push_back(*x);
            ys.push_back(*y);
        }
    }
    return {xs, ys};
}

}  // namespace detail

/// Aggregates per-case rows into Table-style summary rows: mean / population
/// std / median per metric plus a Wilcoxon signed-rank comparison of each
/// model against the reference model. Requires every model to be evaluated
/// on the identical case set.
inline std::vector<SummaryRow> summarize(
    const std::vector<std::pair<std::string, std::vector<MetricsRow>>>& per_model,
    const std::string& reference_model) {
    if (per_model.empty()) throw Error("summarize called with no models");

    const std::vector<MetricsRow>* reference = nullptr;
    std::set<std::string> ref_ids;
    for (const auto& [name, rows] : per_model)
        if (name == reference_model) reference = &rows;
    if (!reference)
        throw Error("reference model '" + reference_model + "' not among summarized models");
    for (const auto& r : *reference) ref_ids.insert(r.study_id);

    for (const auto& [name, rows] : per_model) {
        std::set<std::string> ids;
        for (const auto& r : rows) ids.insert(r.study_id);
        if (ids != ref_ids)
            throw CaseSetMismatch("model '" + name +
                                  "' was not evaluated on the reference case set");
    }

    std::vector<SummaryRow> out;
    for (const auto& [name, rows] : per_model) {
        SummaryRow s;
        s.model_name = name;
        s.cases = static_cast<int>(rows.size());

        std::vector<double> dices, hds;
        for (const auto& r : rows) {
            dices.push_back(r.dice);
            if (r.hd95_mm) hds.push_back(*r.hd95_mm);
        }
        s.dice_mean = mean(dices);
        s.dice_std = stddev_population(dices);
        s.dice_median = median(dices);
        if (!hds.empty()) {
            s.hd95_mean = mean(hds);
            s.hd95_std = stddev_population(hds);
            s.hd95_median = median(hds);
        }

        if (name != reference_model) {
            auto [d_a, d_b] = detail::paired_metric(
                rows, *reference, [](const MetricsRow& r) -> std::optional<double> {
                    return r.dice;
                });
            try {
                const auto w = wilcoxon_signed_rank(d_a, d_b);
                s.dice_p = w.p_value;
                s.dice_label = significance_label(w.p_value);
            } catch (const TooFewPairs&) {
                s.dice_label = "-";
            }
            auto [h_a, h_b] = detail::paired_metric(
                rows, *reference,
                [](const MetricsRow& r) -> std::optional<double> { return r.hd95_mm; });
            try {
                const auto w = wilcoxon_signed_rank(h_a, h_b);
                s.hd95_p = w.p_value;
                s.hd95_label = significance_label(w.p_value);
            } catch (const TooFewPairs&) {
                s.hd95_label = "-";
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

/// CSV with one line per case and model: study_id,model,dice,hd95_mm,fpe,fne.
/// Absent metrics render as empty fields.
inline std::string render_cases_csv(
    const std::vector<std::pair<std::string, std::vector<MetricsRow>>>& per_model) {
    std::ostringstream out;
    out << "study_id,model,dice,hd95_mm,fpe,fne\n";
    auto cell = [](const std::optional<double>& v) {
        return v ? detail::fmt4(*v) : std::string();
    };
    for (const auto& [model, rows] : per_model)
        for (const auto& r : rows)
            out << r.study_id << ',' << model << ',' << detail::fmt4(r.dice) << ','
                << cell(r.hd95_mm) << ',' << cell(r.fpe) << ',' << cell(r.fne) << '\n';
    return out.str();
}

/// Markdown table mirroring the per-metric "Mean (Std) | Median | p-value"
/// column layout; the reference row's p-value cells render as "-".
inline std::string render_summary_markdown(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "| Model input | Dice Mean (Std) | Dice Median | Dice p-value | "
           "HD95 (mm) Mean (Std) | HD95 (mm) Median | HD95 p-value |\n";
    out << "| --- | --- | --- | --- | --- | --- | --- |\n";
    for (const auto& r : rows) {
        out << "| " << r.model_name << " | " << detail::fmt4(r.dice_mean) << " ("
            << detail::fmt4(r.dice_std) << ") | " << detail::fmt4(r.dice_median) << " | "
            << r.dice_label << " | " << detail::fmt4(r.hd95_mean) << " ("
            << detail::fmt4(r.hd95_std) << ") | " << detail::fmt4(r.hd95_median) << " | "
            << r.hd95_label << " |\n";
    }
    return out.str();
}

inline std::string significance_footnote() {
    return "NS - not significant, p-value > 0.05; *, p-value < 0.05; "
           "**, p-value < 0.01; ***, p-value < 0.001.\n";
}

}  // namespace pktseg::metrics

#endif  // PKTSEG_METRICS_SUMMARY_HPP
